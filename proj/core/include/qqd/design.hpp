#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qqd {

/// Dense row-major matrix. Zero-width matrices are valid and keep their row
/// count, which is how a design without qualitative (or quantitative) factors
/// is represented.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Run count, factor split and per-factor level counts. Factors are indexed
/// 0..p+q-1 with the p qualitative factors first.
class DesignSpec {
 public:
  DesignSpec(int n, int p, int q, std::vector<int> levels);

  int runs() const noexcept { return n_; }
  int qualitative() const noexcept { return p_; }
  int quantitative() const noexcept { return q_; }
  int factors() const noexcept { return p_ + q_; }
  const std::vector<int>& levels() const noexcept { return levels_; }
  int levels(int factor) const { return levels_.at(static_cast<std::size_t>(factor)); }
  bool is_qualitative(int factor) const noexcept { return factor < p_; }

  /// Number of level combinations N. Empty when the product overflows 64 bits.
  std::optional<std::uint64_t> combination_count() const noexcept;

  /// Number of quantitative factors with an odd level count.
  int odd_quantitative_count() const noexcept;

  /// True when every level count divides the run count.
  bool utype_feasible() const noexcept;

  /// Same factors, different run count.
  DesignSpec with_runs(int n) const { return {n, p_, q_, levels_}; }

  std::string to_string() const;

  friend bool operator==(const DesignSpec&, const DesignSpec&) = default;

 private:
  int n_;
  int p_;
  int q_;
  std::vector<int> levels_;
};

/// Kernel parameters and comparison tolerances.
struct CriterionConfig {
  double a = 1.5;           // qualitative kernel, equal levels
  double b = 1.25;          // qualitative kernel, different levels
  double tol_equiv = 1e-10;
  double tol_published = 5e-5;

  void validate() const;
  bool is_default_kernel() const noexcept { return a == 1.5 && b == 1.25; }
};

/// Tolerance for recognising a quantitative value as a lattice point.
inline constexpr double kLatticeTolerance = 1e-9;

/// A design with p qualitative columns (integer levels) and q quantitative
/// columns (values in [0, 1]). Quantitative values are the canonical storage;
/// integer levels are a view recovered through the midpoint lattice.
class Design {
 public:
  Design(DesignSpec spec, Matrix<int> qualitative, Matrix<double> quantitative);

  const DesignSpec& spec() const noexcept { return spec_; }
  int runs() const noexcept { return spec_.runs(); }
  const Matrix<int>& qualitative() const noexcept { return qual_; }
  const Matrix<double>& quantitative() const noexcept { return quant_; }

  /// Exchanges the entries of rows i and j in one factor column. Column
  /// balance is preserved, which makes this the search neighbourhood move.
  void swap_entries(int factor, int i, int j);

  friend bool operator==(const Design&, const Design&) = default;

 private:
  DesignSpec spec_;
  Matrix<int> qual_;
  Matrix<double> quant_;
};

/// Lattice point counts y(D), lexicographic with the first factor slowest.
struct FrequencyVector {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

/// Midpoint lattice: (2*level + 1) / (2s).
double level_to_unit(int level, int s);

/// Inverse of level_to_unit within `tol`; empty if x is not a lattice point.
std::optional<int> unit_to_level(double x, int s, double tol = kLatticeTolerance);

Design design_from_levels(const DesignSpec& spec, const Matrix<int>& qualitative_levels,
                          const Matrix<int>& quantitative_levels);

Design design_from_raw(const DesignSpec& spec, const Matrix<int>& qualitative_levels,
                       const Matrix<double>& quantitative_values);

/// Integer levels of every factor (n x (p+q)). Throws DomainError naming the
/// first quantitative entry that is not a lattice point.
Matrix<int> lattice_levels(const Design& design);

bool is_lattice(const Design& design) noexcept;

enum class ColumnDefectKind { kRunsNotDivisible, kUnbalanced, kNonLattice };

struct ColumnDefect {
  int factor;
  ColumnDefectKind kind;
  std::string message;
};

struct UTypeReport {
  bool passed = true;
  std::vector<ColumnDefect> defects;
};

UTypeReport validate_utype(const Design& design);

/// One (qualitative factor, level) slice of an MCD check.
struct SliceDiagnostic {
  int factor;
  int level;
  bool is_lhd;
};

struct McdReport {
  bool is_mcd = false;
  bool quantitative_is_lhd = false;
  std::vector<SliceDiagnostic> slices;
};

/// Marginally coupled design check. The quantitative part must be an LHD and,
/// for every qualitative factor with s levels and every level, the n/s rows at
/// that level must have quantitative levels whose bins floor(level / s) form a
/// permutation of 0..n/s-1 in every quantitative column.
///
/// Throws StructureError if a quantitative column does not have n levels, a
/// qualitative level count does not divide n, a qualitative column is
/// unbalanced, or the design is not lattice-valued.
McdReport is_mcd(const Design& design);

FrequencyVector frequency_vector(const Design& design);

/// Lexicographic flat index of a level combination (first factor slowest).
std::uint64_t combination_index(std::span<const int> levels, std::span<const int> level_counts);

/// Every level combination of `spec`'s factors repeated `repetitions` times;
/// the run count of `spec` is ignored and replaced by repetitions * N.
Design full_factorial(const DesignSpec& spec, int repetitions);

/// Upper bound on the rows full_factorial will materialise.
inline constexpr std::uint64_t kMaxFullFactorialRows = std::uint64_t{1} << 22;

}  // namespace qqd
