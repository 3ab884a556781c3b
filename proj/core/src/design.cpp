#include "qqd/design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qqd/error.hpp"

namespace qqd {

namespace {

std::string where(std::size_t row, std::size_t factor) {
  return "row " + std::to_string(row + 1) + ", column " + std::to_string(factor + 1);
}

}  // namespace

DesignSpec::DesignSpec(int n, int p, int q, std::vector<int> levels)
    : n_(n), p_(p), q_(q), levels_(std::move(levels)) {
  if (n_ < 1) throw DomainError("run count must be positive, got " + std::to_string(n_));
  if (p_ < 0 || q_ < 0) throw DomainError("factor counts must be non-negative");
  if (p_ + q_ < 1) throw DomainError("a design needs at least one factor");
  if (levels_.size() != static_cast<std::size_t>(p_ + q_)) {
    throw DomainError("expected " + std::to_string(p_ + q_) + " level counts, got " +
                      std::to_string(levels_.size()));
  }
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k] < 1) {
      throw DomainError("level count of factor " + std::to_string(k + 1) + " must be positive");
    }
  }
}

std::optional<std::uint64_t> DesignSpec::combination_count() const noexcept {
  std::uint64_t total = 1;
  for (int s : levels_) {
    if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(s), &total)) return std::nullopt;
  }
  return total;
}

int DesignSpec::odd_quantitative_count() const noexcept {
  return static_cast<int>(
      std::count_if(levels_.begin() + p_, levels_.end(), [](int s) { return s % 2 == 1; }));
}

bool DesignSpec::utype_feasible() const noexcept {
  return std::all_of(levels_.begin(), levels_.end(), [this](int s) { return n_ % s == 0; });
}

std::string DesignSpec::to_string() const {
  std::ostringstream os;
  os << "U(" << n_ << "; p=" << p_ << ", q=" << q_ << "; levels=";
  for (std::size_t k = 0; k < levels_.size(); ++k) os << (k ? "," : "") << levels_[k];
  os << ")";
  return os.str();
}

void CriterionConfig::validate() const {
  if (!(b > 0.0)) throw DomainError("kernel parameter b must be positive");
  if (!(a > b)) throw DomainError("kernel parameter a must exceed b");
  if (!(tol_equiv > 0.0) || !(tol_published > 0.0)) throw DomainError("tolerances must be positive");
}

Design::Design(DesignSpec spec, Matrix<int> qualitative, Matrix<double> quantitative)
    : spec_(std::move(spec)), qual_(std::move(qualitative)), quant_(std::move(quantitative)) {
  const auto n = static_cast<std::size_t>(spec_.runs());
  if (qual_.rows() != n || qual_.cols() != static_cast<std::size_t>(spec_.qualitative())) {
    throw DomainError("qualitative block must be " + std::to_string(n) + " x " +
                      std::to_string(spec_.qualitative()));
  }
  if (quant_.rows() != n || quant_.cols() != static_cast<std::size_t>(spec_.quantitative())) {
    throw DomainError("quantitative block must be " + std::to_string(n) + " x " +
                      std::to_string(spec_.quantitative()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < qual_.cols(); ++k) {
      const int s = spec_.levels(static_cast<int>(k));
      if (qual_(i, k) < 0 || qual_(i, k) >= s) {
        throw DomainError("qualitative level " + std::to_string(qual_(i, k)) + " outside 0.." +
                          std::to_string(s - 1) + " at " + where(i, k));
      }
    }
    for (std::size_t k = 0; k < quant_.cols(); ++k) {
      const double x = quant_(i, k);
      if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("quantitative value outside [0,1] at " + where(i, k + qual_.cols()));
      }
    }
  }
}

void Design::swap_entries(int factor, int i, int j) {
  const auto p = spec_.qualitative();
  if (factor < 0 || factor >= spec_.factors()) throw DomainError("factor index out of range");
  if (i < 0 || j < 0 || i >= runs() || j >= runs()) throw DomainError("row index out of range");
  if (factor < p) {
    std::swap(qual_(i, factor), qual_(j, factor));
  } else {
    std::swap(quant_(i, factor - p), quant_(j, factor - p));
  }
}

double level_to_unit(int level, int s) {
  if (s < 1 || level < 0 || level >= s) {
    throw DomainError("level " + std::to_string(level) + " outside 0.." + std::to_string(s - 1));
  }
  return (2.0 * level + 1.0) / (2.0 * s);
}

std::optional<int> unit_to_level(double x, int s, double tol) {
  const double nearest = std::round((2.0 * s * x - 1.0) / 2.0);
  if (nearest < 0.0 || nearest >= s) return std::nullopt;
  const int level = static_cast<int>(nearest);
  if (std::abs(level_to_unit(level, s) - x) > tol) return std::nullopt;
  return level;
}

Design design_from_levels(const DesignSpec& spec, const Matrix<int>& qualitative_levels,
                          const Matrix<int>& quantitative_levels) {
  const int p = spec.qualitative();
  if (quantitative_levels.cols() != static_cast<std::size_t>(spec.quantitative())) {
    throw DomainError("quantitative block must have " + std::to_string(spec.quantitative()) +
                      " columns");
  }
  Matrix<double> values(quantitative_levels.rows(), quantitative_levels.cols());
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t k = 0; k < values.cols(); ++k) {
      const int s = spec.levels(p + static_cast<int>(k));
      const int level = quantitative_levels(i, k);
      if (level < 0 || level >= s) {
        throw DomainError("quantitative level " + std::to_string(level) + " outside 0.." +
                          std::to_string(s - 1) + " at " + where(i, p + k));
      }
      values(i, k) = level_to_unit(level, s);
    }
  }
  return Design(spec, qualitative_levels, std::move(values));
}

Design design_from_raw(const DesignSpec& spec, const Matrix<int>& qualitative_levels,
                       const Matrix<double>& quantitative_values) {
  return Design(spec, qualitative_levels, quantitative_values);
}

Matrix<int> lattice_levels(const Design& design) {
  const auto& spec = design.spec();
  const auto n = static_cast<std::size_t>(spec.runs());
  const auto p = static_cast<std::size_t>(spec.qualitative());
  Matrix<int> out(n, static_cast<std::size_t>(spec.factors()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < p; ++k) out(i, k) = design.qualitative()(i, k);
    for (std::size_t k = 0; k < design.quantitative().cols(); ++k) {
      const int s = spec.levels(static_cast<int>(p + k));
      const auto level = unit_to_level(design.quantitative()(i, k), s);
      if (!level) {
        throw DomainError("quantitative value at " + where(i, p + k) +
                          " is not a lattice point of a " + std::to_string(s) + "-level factor");
      }
      out(i, p + k) = *level;
    }
  }
  return out;
}

bool is_lattice(const Design& design) noexcept {
  const auto& spec = design.spec();
  const auto& x = design.quantitative();
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t k = 0; k < x.cols(); ++k) {
      if (!unit_to_level(x(i, k), spec.levels(spec.qualitative() + static_cast<int>(k)))) {
        return false;
      }
    }
  }
  return true;
}

UTypeReport validate_utype(const Design& design) {
  const auto& spec = design.spec();
  const int n = spec.runs();
  const int p = spec.qualitative();
  UTypeReport report;
  auto fail = [&](int factor, ColumnDefectKind kind, std::string msg) {
    report.passed = false;
    report.defects.push_back({factor, kind, std::move(msg)});
  };

  for (int k = 0; k < spec.factors(); ++k) {
    const int s = spec.levels(k);
    std::vector<int> column(static_cast<std::size_t>(n));
    bool lattice = true;
    for (int i = 0; i < n; ++i) {
      if (k < p) {
        column[static_cast<std::size_t>(i)] = design.qualitative()(i, k);
      } else {
        auto level = unit_to_level(design.quantitative()(i, k - p), s);
        if (!level) {
          lattice = false;
          break;
        }
        column[static_cast<std::size_t>(i)] = *level;
      }
    }
    const std::string name = "column " + std::to_string(k + 1);
    if (!lattice) {
      fail(k, ColumnDefectKind::kNonLattice, name + ": values are not on the " +
                                                 std::to_string(s) + "-level lattice");
      continue;
    }
    if (n % s != 0) {
      fail(k, ColumnDefectKind::kRunsNotDivisible,
           name + ": " + std::to_string(s) + " levels do not divide " + std::to_string(n) + " runs");
      continue;
    }
    std::vector<int> counts(static_cast<std::size_t>(s), 0);
    for (int v : column) ++counts[static_cast<std::size_t>(v)];
    if (std::any_of(counts.begin(), counts.end(), [&](int c) { return c != n / s; })) {
      fail(k, ColumnDefectKind::kUnbalanced,
           name + ": levels do not each appear " + std::to_string(n / s) + " times");
    }
  }
  return report;
}

McdReport is_mcd(const Design& design) {
  const auto& spec = design.spec();
  const int n = spec.runs();
  const int p = spec.qualitative();
  if (spec.quantitative() < 1) throw StructureError("MCD check needs quantitative factors");
  for (int k = p; k < spec.factors(); ++k) {
    if (spec.levels(k) != n) {
      throw StructureError("quantitative column " + std::to_string(k + 1) + " has " +
                           std::to_string(spec.levels(k)) + " levels; an LHD column needs " +
                           std::to_string(n));
    }
  }
  for (int k = 0; k < p; ++k) {
    if (n % spec.levels(k) != 0) {
      throw StructureError("qualitative column " + std::to_string(k + 1) + " has " +
                           std::to_string(spec.levels(k)) + " levels, which do not divide " +
                           std::to_string(n) + " runs");
    }
  }
  Matrix<int> levels;
  try {
    levels = lattice_levels(design);
  } catch (const DomainError& e) {
    throw StructureError(std::string("MCD check needs a lattice design: ") + e.what());
  }
  for (const auto& defect : validate_utype(design).defects) {
    if (defect.factor < p) throw StructureError("MCD check: " + defect.message);
  }

  McdReport report;
  auto is_permutation = [](const std::vector<int>& values, int size) {
    std::vector<char> seen(static_cast<std::size_t>(size), 0);
    for (int v : values) {
      if (v < 0 || v >= size || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = 1;
    }
    return static_cast<int>(values.size()) == size;
  };

  report.quantitative_is_lhd = true;
  for (int k = p; k < spec.factors(); ++k) {
    std::vector<int> column(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = levels(i, k);
    if (!is_permutation(column, n)) report.quantitative_is_lhd = false;
  }

  bool slices_ok = true;
  for (int f = 0; f < p; ++f) {
    const int s = spec.levels(f);
    const int slice_runs = n / s;
    for (int level = 0; level < s; ++level) {
      bool ok = true;
      for (int k = p; k < spec.factors() && ok; ++k) {
        std::vector<int> bins;
        for (int i = 0; i < n; ++i) {
          if (levels(i, f) == level) bins.push_back(levels(i, k) / s);
        }
        ok = is_permutation(bins, slice_runs);
      }
      report.slices.push_back({f, level, ok});
      slices_ok = slices_ok && ok;
    }
  }
  report.is_mcd = report.quantitative_is_lhd && slices_ok;
  return report;
}

std::uint64_t combination_index(std::span<const int> levels, std::span<const int> level_counts) {
  std::uint64_t index = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    index = index * static_cast<std::uint64_t>(level_counts[k]) +
            static_cast<std::uint64_t>(levels[k]);
  }
  return index;
}

FrequencyVector frequency_vector(const Design& design) {
  const auto& spec = design.spec();
  const auto total = spec.combination_count();
  if (!total || *total > kMaxFullFactorialRows * 4) {
    throw CapacityError("frequency vector of " + spec.to_string() + " is too long to materialise");
  }
  const Matrix<int> levels = lattice_levels(design);
  FrequencyVector y;
  y.counts.assign(static_cast<std::size_t>(*total), 0);
  y.total = static_cast<std::uint64_t>(spec.runs());
  for (std::size_t i = 0; i < levels.rows(); ++i) {
    ++y.counts[combination_index(levels.row(i), spec.levels())];
  }
  return y;
}

Design full_factorial(const DesignSpec& spec, int repetitions) {
  if (repetitions < 1) throw DomainError("repetitions must be positive");
  const auto combos = spec.combination_count();
  std::uint64_t rows = 0;
  if (!combos || __builtin_mul_overflow(*combos, static_cast<std::uint64_t>(repetitions), &rows) ||
      rows > kMaxFullFactorialRows) {
    throw CapacityError("full factorial of " + spec.to_string() + " exceeds " +
                        std::to_string(kMaxFullFactorialRows) + " rows");
  }
  const int m = spec.factors();
  const int p = spec.qualitative();
  const DesignSpec out_spec = spec.with_runs(static_cast<int>(rows));
  Matrix<int> qual(rows, static_cast<std::size_t>(p));
  Matrix<int> quant(rows, static_cast<std::size_t>(spec.quantitative()));
  std::vector<int> current(static_cast<std::size_t>(m), 0);
  std::size_t r = 0;
  for (std::uint64_t c = 0; c < *combos; ++c) {
    for (int rep = 0; rep < repetitions; ++rep, ++r) {
      for (int k = 0; k < m; ++k) {
        if (k < p) {
          qual(r, static_cast<std::size_t>(k)) = current[static_cast<std::size_t>(k)];
        } else {
          quant(r, static_cast<std::size_t>(k - p)) = current[static_cast<std::size_t>(k)];
        }
      }
    }
    // odometer, last factor fastest
    for (int k = m - 1; k >= 0; --k) {
      auto& digit = current[static_cast<std::size_t>(k)];
      if (++digit < spec.levels(k)) break;
      digit = 0;
    }
  }
  return design_from_levels(out_spec, qual, quant);
}

}  // namespace qqd
