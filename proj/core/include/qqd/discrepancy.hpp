#pragma once

#include <cstdint>
#include <vector>

#include "qqd/design.hpp"

namespace qqd {

enum class FactorKind { kQualitative, kQuantitative };

/// One Kronecker factor A_k of the quadratic form.
struct KernelFactor {
  int s = 0;
  FactorKind kind = FactorKind::kQualitative;
  Matrix<double> entries;

  /// Closed-form common row sum: a + b(s-1) (qualitative) or
  /// 4s/3 + 1/(6s) (quantitative).
  double expected_row_sum(const CriterionConfig& config = {}) const;
};

/// Wrap-around kernel 3/2 - |t - z| + |t - z|^2.
inline double wrap_kernel(double t, double z) noexcept {
  const double d = t > z ? t - z : z - t;
  return 1.5 - d + d * d;
}

KernelFactor kernel_matrix(int factor, const DesignSpec& spec, const CriterionConfig& config = {});

/// Number of qualitative columns on which rows i and j agree.
int coincidence_number(const Design& design, int i, int j);

/// The constant term -prod_k (a + (s_k - 1) b) / s_k * (4/3)^q.
double qqd_constant(const DesignSpec& spec, const CriterionConfig& config = {});

/// Squared QQD by the pairwise closed form (double sum over all ordered row
/// pairs, diagonal included).
double qqd_squared(const Design& design, const CriterionConfig& config = {});

inline constexpr std::uint64_t kQuadraticFormCap = 10'000;

/// Squared QQD as C + y'Ay/n^2 over the frequency vector. A is applied through
/// its Kronecker factors and never materialised, but N is still capped.
double qqd_squared_quadratic(const Design& design, const CriterionConfig& config = {},
                             std::uint64_t max_combinations = kQuadraticFormCap);

/// Squared wrap-around discrepancy of the quantitative columns.
double wd_squared(const Design& design);

/// Discrete discrepancy of the qualitative columns under kernel (a, b).
double dd(const Design& design, const CriterionConfig& config = {});

enum class SwdMode { kWd, kWdSquared };

/// How quantitative levels are placed in [0, 1] before each slice is scored.
/// kStored uses the design's values as is; kEndpoint maps level l of an
/// s-level factor to l / (s - 1).
enum class SwdLattice { kStored, kEndpoint };

/// Sum, over every qualitative factor and each of its levels, of the WD (or
/// WD^2) of the quantitative rows at that level.
double swd(const Design& design, SwdMode mode, SwdLattice lattice = SwdLattice::kStored);

const char* to_string(SwdMode mode) noexcept;
const char* to_string(SwdLattice lattice) noexcept;

/// Per-pair kernel components of a design, kept in step with column swaps so
/// that each swap costs O(n q) instead of a full O(n^2 q) recompute.
///
/// The off-diagonal sum is held in 128-bit fixed point. Pair terms are pure
/// functions of the cached components, so undoing a swap restores the value
/// bit for bit and zero-change moves are detected exactly.
class PairCache {
 public:
  __extension__ using Fixed = __int128;

  explicit PairCache(const Design& design, const CriterionConfig& config = {});

  int runs() const noexcept { return n_; }
  double value() const noexcept { return to_value(sum_); }

  int coincidence(int i, int j) const;
  /// Cached 3/2 - |x_ik - x_jk| + |x_ik - x_jk|^2 for quantitative column k.
  double factor(int i, int j, int k) const;
  /// b^p (a/b)^delta_ij prod_k factor(i, j, k).
  double pair_term(int i, int j) const;

  struct SwapEvaluation {
    double value;    // squared QQD after the swap
    double delta;    // value - current value
    bool neutral;    // the fixed-point sum does not change
  };

  /// Scores swapping rows i and j in `factor` without modifying anything.
  SwapEvaluation evaluate_swap(const Design& design, int factor, int i, int j) const;

  /// Applies the swap to both the design and the cache; returns the new value.
  double apply_swap(Design& design, int factor, int i, int j);

 private:
  std::size_t index(int i, int j) const noexcept;
  double term_from(int coincidence, const double* factors) const noexcept;
  Fixed to_fixed(double term) const noexcept;
  double to_value(Fixed sum) const noexcept;

  template <typename Visit>
  void for_each_changed_pair(const Design& design, int factor, int i, int j, Visit&& visit) const;

  int n_;
  int p_;
  int q_;
  double constant_;
  double diagonal_;        // sum of the n diagonal terms
  double scale_;           // largest possible pair term
  std::vector<double> coincidence_power_;  // b^p (a/b)^d, d = 0..p
  std::vector<std::uint16_t> coincidence_;
  std::vector<double> factors_;
  std::vector<std::int64_t> fixed_;
  Fixed sum_ = 0;
};

/// Swaps rows i and j of `column` in both design and cache and returns the new
/// squared QQD. i == j is a no-op.
double qqd_delta_swap(PairCache& cache, Design& design, int column, int i, int j);

}  // namespace qqd
