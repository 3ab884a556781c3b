#include "qqd/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qqd/error.hpp"
#include "qqd/summation.hpp"

namespace qqd {

namespace {

// Mean over all ordered row pairs of b^p (a/b)^delta prod_k wrap_kernel.
// Either block may be zero-width.
double mean_kernel(const Matrix<int>& qual, const Matrix<double>& quant, double a, double b) {
  const std::size_t n = std::max(qual.rows(), quant.rows());
  const std::size_t p = qual.cols();
  const std::size_t q = quant.cols();
  std::vector<double> power(p + 1);
  for (std::size_t d = 0; d <= p; ++d) {
    power[d] = std::pow(b, static_cast<double>(p - d)) * std::pow(a, static_cast<double>(d));
  }
  auto term = [&](std::size_t i, std::size_t j) {
    std::size_t delta = 0;
    for (std::size_t k = 0; k < p; ++k) delta += qual(i, k) == qual(j, k) ? 1 : 0;
    double value = power[delta];
    for (std::size_t k = 0; k < q; ++k) value *= wrap_kernel(quant(i, k), quant(j, k));
    return value;
  };
  CompensatedSum diagonal;
  CompensatedSum off_diagonal;
  for (std::size_t i = 0; i < n; ++i) {
    diagonal += term(i, i);
    for (std::size_t j = i + 1; j < n; ++j) off_diagonal += term(i, j);
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  return (diagonal.value() + 2.0 * off_diagonal.value()) / nn;
}

double wd_squared_of(const Matrix<double>& quant) {
  const Matrix<int> none(quant.rows(), 0);
  return -std::pow(4.0 / 3.0, static_cast<double>(quant.cols())) +
         mean_kernel(none, quant, 1.5, 1.25);
}

}  // namespace

double KernelFactor::expected_row_sum(const CriterionConfig& config) const {
  if (kind == FactorKind::kQualitative) return config.a + config.b * (s - 1);
  return 4.0 * s / 3.0 + 1.0 / (6.0 * s);
}

KernelFactor kernel_matrix(int factor, const DesignSpec& spec, const CriterionConfig& config) {
  if (factor < 0 || factor >= spec.factors()) {
    throw DomainError("factor index " + std::to_string(factor) + " out of range");
  }
  KernelFactor out;
  out.s = spec.levels(factor);
  out.kind = spec.is_qualitative(factor) ? FactorKind::kQualitative : FactorKind::kQuantitative;
  const auto s = static_cast<std::size_t>(out.s);
  out.entries = Matrix<double>(s, s);
  const double ss = static_cast<double>(out.s) * out.s;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      if (out.kind == FactorKind::kQualitative) {
        out.entries(i, j) = i == j ? config.a : config.b;
      } else {
        const double d = static_cast<double>(i > j ? i - j : j - i);
        out.entries(i, j) = 1.5 - d * (out.s - d) / ss;
      }
    }
  }
  return out;
}

int coincidence_number(const Design& design, int i, int j) {
  const int n = design.runs();
  if (i < 0 || j < 0 || i >= n || j >= n) throw DomainError("row index out of range");
  const auto& x = design.qualitative();
  int count = 0;
  for (std::size_t k = 0; k < x.cols(); ++k) count += x(i, k) == x(j, k) ? 1 : 0;
  return count;
}

double qqd_constant(const DesignSpec& spec, const CriterionConfig& config) {
  double c = std::pow(4.0 / 3.0, spec.quantitative());
  for (int k = 0; k < spec.qualitative(); ++k) {
    const double s = spec.levels(k);
    c *= (config.a + (s - 1.0) * config.b) / s;
  }
  return -c;
}

double qqd_squared(const Design& design, const CriterionConfig& config) {
  config.validate();
  return qqd_constant(design.spec(), config) +
         mean_kernel(design.qualitative(), design.quantitative(), config.a, config.b);
}

double qqd_squared_quadratic(const Design& design, const CriterionConfig& config,
                             std::uint64_t max_combinations) {
  config.validate();
  const auto& spec = design.spec();
  const auto total = spec.combination_count();
  if (!total || *total > max_combinations) {
    throw CapacityError("quadratic form needs N <= " + std::to_string(max_combinations) +
                        " level combinations for " + spec.to_string() +
                        "; use the closed form instead");
  }
  const FrequencyVector y = frequency_vector(design);
  const auto size = static_cast<std::size_t>(*total);

  // A y with A = A_1 (x) ... (x) A_m, one mode product per factor.
  std::vector<double> v(y.counts.begin(), y.counts.end());
  std::vector<double> w(size);
  std::size_t outer = 1;
  for (int k = 0; k < spec.factors(); ++k) {
    const auto s = static_cast<std::size_t>(spec.levels(k));
    const std::size_t inner = size / (outer * s);
    const KernelFactor factor = kernel_matrix(k, spec, config);
    for (std::size_t l = 0; l < outer; ++l) {
      for (std::size_t r = 0; r < inner; ++r) {
        for (std::size_t a = 0; a < s; ++a) {
          double acc = 0.0;
          for (std::size_t b = 0; b < s; ++b) {
            acc += factor.entries(a, b) * v[(l * s + b) * inner + r];
          }
          w[(l * s + a) * inner + r] = acc;
        }
      }
    }
    v.swap(w);
    outer *= s;
  }
  CompensatedSum form;
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (y.counts[idx] != 0) form += static_cast<double>(y.counts[idx]) * v[idx];
  }
  const double n = spec.runs();
  return qqd_constant(spec, config) + form.value() / (n * n);
}

double wd_squared(const Design& design) {
  if (design.spec().quantitative() < 1) {
    throw DomainError("wrap-around discrepancy needs at least one quantitative factor");
  }
  return wd_squared_of(design.quantitative());
}

double dd(const Design& design, const CriterionConfig& config) {
  config.validate();
  const auto& spec = design.spec();
  if (spec.qualitative() < 1) {
    throw DomainError("discrete discrepancy needs at least one qualitative factor");
  }
  const DesignSpec qualitative_only(
      spec.runs(), spec.qualitative(), 0,
      std::vector<int>(spec.levels().begin(), spec.levels().begin() + spec.qualitative()));
  const Matrix<double> none(static_cast<std::size_t>(spec.runs()), 0);
  return qqd_constant(qualitative_only, config) +
         mean_kernel(design.qualitative(), none, config.a, config.b);
}

double swd(const Design& design, SwdMode mode, SwdLattice lattice) {
  const auto& spec = design.spec();
  const int p = spec.qualitative();
  const int q = spec.quantitative();
  if (p < 1 || q < 1) throw DomainError("SWD needs both qualitative and quantitative factors");

  Matrix<double> values = design.quantitative();
  if (lattice == SwdLattice::kEndpoint) {
    const Matrix<int> levels = lattice_levels(design);
    for (std::size_t i = 0; i < values.rows(); ++i) {
      for (int k = 0; k < q; ++k) {
        const int s = spec.levels(p + k);
        values(i, static_cast<std::size_t>(k)) =
            s == 1 ? 0.0 : static_cast<double>(levels(i, static_cast<std::size_t>(p + k))) / (s - 1);
      }
    }
  }

  CompensatedSum total;
  for (int f = 0; f < p; ++f) {
    for (int level = 0; level < spec.levels(f); ++level) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < values.rows(); ++i) {
        if (design.qualitative()(i, static_cast<std::size_t>(f)) == level) rows.push_back(i);
      }
      if (rows.empty()) {
        throw DomainError("SWD: level " + std::to_string(level) + " of qualitative column " +
                          std::to_string(f + 1) + " has no runs");
      }
      Matrix<double> slice(rows.size(), static_cast<std::size_t>(q));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t k = 0; k < slice.cols(); ++k) slice(r, k) = values(rows[r], k);
      }
      const double w2 = wd_squared_of(slice);
      total += mode == SwdMode::kWdSquared ? w2 : std::sqrt(std::max(0.0, w2));
    }
  }
  return total.value();
}

const char* to_string(SwdMode mode) noexcept {
  return mode == SwdMode::kWd ? "wd" : "wd_squared";
}

const char* to_string(SwdLattice lattice) noexcept {
  return lattice == SwdLattice::kStored ? "stored" : "endpoint";
}

// ---------------------------------------------------------------------------
// PairCache

namespace {
constexpr double kFixedOne = 4611686018427387904.0;  // 2^62
constexpr std::size_t kMaxCachedEntries = 60'000'000;
}  // namespace

PairCache::PairCache(const Design& design, const CriterionConfig& config)
    : n_(design.runs()),
      p_(design.spec().qualitative()),
      q_(design.spec().quantitative()),
      constant_(qqd_constant(design.spec(), config)) {
  config.validate();
  if (p_ > 0xFFFF) throw CapacityError("pair cache supports at most 65535 qualitative factors");
  const auto n = static_cast<std::size_t>(n_);
  const std::size_t pairs = n * (n - 1) / 2;
  if (pairs * static_cast<std::size_t>(q_ + 1) > kMaxCachedEntries) {
    throw CapacityError("pair cache for " + std::to_string(n_) + " runs and " +
                        std::to_string(q_) + " quantitative factors is too large");
  }
  coincidence_power_.resize(static_cast<std::size_t>(p_) + 1);
  for (int d = 0; d <= p_; ++d) {
    coincidence_power_[static_cast<std::size_t>(d)] =
        std::pow(config.b, p_ - d) * std::pow(config.a, d);
  }
  scale_ = std::pow(config.a, p_) * std::pow(1.5, q_);
  diagonal_ = static_cast<double>(n_) * scale_;

  coincidence_.resize(pairs);
  factors_.resize(pairs * static_cast<std::size_t>(q_));
  fixed_.resize(pairs);
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const std::size_t idx = index(i, j);
      coincidence_[idx] = static_cast<std::uint16_t>(coincidence_number(design, i, j));
      for (int k = 0; k < q_; ++k) {
        factors_[idx * static_cast<std::size_t>(q_) + static_cast<std::size_t>(k)] =
            wrap_kernel(design.quantitative()(i, k), design.quantitative()(j, k));
      }
      fixed_[idx] = static_cast<std::int64_t>(
          to_fixed(term_from(coincidence_[idx], &factors_[idx * static_cast<std::size_t>(q_)])));
      sum_ += fixed_[idx];
    }
  }
}

std::size_t PairCache::index(int i, int j) const noexcept {
  if (i > j) std::swap(i, j);
  const auto a = static_cast<std::size_t>(i);
  const auto n = static_cast<std::size_t>(n_);
  return a * (2 * n - a - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

double PairCache::term_from(int coincidence, const double* factors) const noexcept {
  double value = coincidence_power_[static_cast<std::size_t>(coincidence)];
  for (int k = 0; k < q_; ++k) value *= factors[k];
  return value;
}

PairCache::Fixed PairCache::to_fixed(double term) const noexcept {
  return static_cast<Fixed>(std::llround(term / scale_ * kFixedOne));
}

double PairCache::to_value(Fixed sum) const noexcept {
  const long double off = static_cast<long double>(sum) / kFixedOne * scale_;
  const long double nn = static_cast<long double>(n_) * n_;
  return static_cast<double>(constant_ + (diagonal_ + 2.0L * off) / nn);
}

int PairCache::coincidence(int i, int j) const {
  if (i == j) return p_;
  return coincidence_.at(index(i, j));
}

double PairCache::factor(int i, int j, int k) const {
  if (k < 0 || k >= q_) throw DomainError("quantitative column out of range");
  if (i == j) return 1.5;
  return factors_.at(index(i, j) * static_cast<std::size_t>(q_) + static_cast<std::size_t>(k));
}

double PairCache::pair_term(int i, int j) const {
  if (i == j) return scale_;
  const std::size_t idx = index(i, j);
  return term_from(coincidence_[idx], &factors_[idx * static_cast<std::size_t>(q_)]);
}

template <typename Visit>
void PairCache::for_each_changed_pair(const Design& design, int factor, int i, int j,
                                      Visit&& visit) const {
  // After the swap row i holds row j's old entry and vice versa; only pairs
  // (i, m) and (j, m) with m outside {i, j} change.
  const int column = factor < p_ ? factor : factor - p_;
  for (int m = 0; m < n_; ++m) {
    if (m == i || m == j) continue;
    for (const auto& [row, partner] : {std::pair{i, j}, std::pair{j, i}}) {
      const std::size_t idx = index(row, m);
      int coin = coincidence_[idx];
      double new_factor = 0.0;
      if (factor < p_) {
        const auto& x = design.qualitative();
        const int other = x(m, column);
        coin += (x(partner, column) == other ? 1 : 0) - (x(row, column) == other ? 1 : 0);
      } else {
        const auto& x = design.quantitative();
        new_factor = wrap_kernel(x(partner, column), x(m, column));
      }
      visit(idx, coin, new_factor);
    }
  }
}

PairCache::SwapEvaluation PairCache::evaluate_swap(const Design& design, int factor, int i,
                                                   int j) const {
  if (factor < 0 || factor >= p_ + q_) throw DomainError("factor index out of range");
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DomainError("row index out of range");
  if (i == j) return {value(), 0.0, true};
  std::vector<double> buffer(static_cast<std::size_t>(q_));
  const int column = factor - p_;
  Fixed change = 0;
  for_each_changed_pair(design, factor, i, j, [&](std::size_t idx, int coin, double f) {
    const double* cached = &factors_[idx * static_cast<std::size_t>(q_)];
    const double* used = cached;
    if (factor >= p_) {
      std::copy(cached, cached + q_, buffer.begin());
      buffer[static_cast<std::size_t>(column)] = f;
      used = buffer.data();
    }
    change += to_fixed(term_from(coin, used)) - fixed_[idx];
  });
  const double after = to_value(sum_ + change);
  return {after, after - value(), change == 0};
}

double PairCache::apply_swap(Design& design, int factor, int i, int j) {
  if (factor < 0 || factor >= p_ + q_) throw DomainError("factor index out of range");
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw DomainError("row index out of range");
  if (i == j) return value();
  const int column = factor - p_;
  for_each_changed_pair(design, factor, i, j, [&](std::size_t idx, int coin, double f) {
    double* cached = &factors_[idx * static_cast<std::size_t>(q_)];
    coincidence_[idx] = static_cast<std::uint16_t>(coin);
    if (factor >= p_) cached[column] = f;
    const auto updated = static_cast<std::int64_t>(to_fixed(term_from(coin, cached)));
    sum_ += static_cast<Fixed>(updated) - fixed_[idx];
    fixed_[idx] = updated;
  });
  design.swap_entries(factor, i, j);
  return value();
}

double qqd_delta_swap(PairCache& cache, Design& design, int column, int i, int j) {
  return cache.apply_swap(design, column, i, j);
}

}  // namespace qqd
