#include "qqd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qqd/discrepancy.hpp"
#include "qqd/error.hpp"
#include "qqd/summation.hpp"

namespace qqd {

namespace mp = boost::multiprecision;

namespace {

void require_feasible(const DesignSpec& spec) {
  if (!spec.utype_feasible()) {
    throw DomainError("no U-type design exists for " + spec.to_string() +
                      ": every level count must divide the run count");
  }
}

// 3/2 - 2i(2s - 2i) / (4 s^2)
double level_gap_kernel(int i, int s) {
  const double ss = static_cast<double>(s) * s;
  return 1.5 - 2.0 * i * (2.0 * s - 2.0 * i) / (4.0 * ss);
}

mp::cpp_rational pow_rational(const mp::cpp_rational& base, int exponent) {
  mp::cpp_rational out = 1;
  for (int e = 0; e < exponent; ++e) out *= base;
  return out;
}

mp::cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mp::cpp_int out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

double lb1(const DesignSpec& spec) {
  require_feasible(spec);
  const int n = spec.runs();
  const int p = spec.qualitative();
  const int m = spec.factors();
  const double c = qqd_constant(spec);
  if (n == 1) return c + std::pow(1.5, m);

  const double nm1 = n - 1.0;
  CompensatedSum log_mean;
  log_mean += p * std::log(1.25);
  for (int k = 0; k < m; ++k) {
    const int s = spec.levels(k);
    const double same = (n - s) / (s * nm1);      // share of pairs at equal level
    const double spread = 2.0 * n / (s * nm1);    // share per distance class
    if (k < p) {
      log_mean += same * std::log(1.2);
      continue;
    }
    log_mean += same * std::log(1.5);
    if (s % 2 == 1) {
      for (int i = 1; i <= (s - 1) / 2; ++i) log_mean += spread * std::log(level_gap_kernel(i, s));
    } else {
      log_mean += (n / (s * nm1)) * std::log(1.25);
      for (int i = 1; i <= s / 2 - 1; ++i) log_mean += spread * std::log(level_gap_kernel(i, s));
    }
  }
  return c + std::pow(1.5, m) / n + (nm1 / n) * std::exp(log_mean.value());
}

double lb_symmetric(int n, int p, int q, int s1, int s2) {
  if (n < 1 || p < 0 || q < 0 || p + q < 1 || s1 < 1 || s2 < 1) {
    throw DomainError("invalid symmetric spec");
  }
  if ((p > 0 && n % s1 != 0) || (q > 0 && n % s2 != 0)) {
    throw DomainError("level counts must divide the run count");
  }
  const double c = -std::pow((5.0 * s1 + 1.0) / (4.0 * s1), p) * std::pow(4.0 / 3.0, q);
  if (n == 1) return c + std::pow(1.5, p + q);
  const double nm1 = n - 1.0;
  double tail = std::pow(1.25, p) * std::pow(1.2, p * (n - s1) / (s1 * nm1)) *
                std::pow(1.5, q * (n - s2) / (s2 * nm1));
  const double exponent = 2.0 * n * q / (s2 * nm1);
  if (s2 % 2 == 1) {
    for (int i = 1; i <= (s2 - 1) / 2; ++i) tail *= std::pow(level_gap_kernel(i, s2), exponent);
  } else {
    tail *= std::pow(1.25, n * q / (s2 * nm1));
    for (int i = 1; i <= s2 / 2 - 1; ++i) tail *= std::pow(level_gap_kernel(i, s2), exponent);
  }
  return c + std::pow(1.5, p + q) / n + (nm1 / n) * tail;
}

double lb2(int n, int p, int q, int s) {
  if (n < 1 || p < 0 || q < 0 || p + q < 1 || s < 1) throw DomainError("invalid lb2 arguments");
  if ((p > 0 && n % s != 0) || (q > 0 && n % 2 != 0)) {
    throw DomainError("lb2 needs s | n and 2 | n");
  }
  const mp::cpp_rational qual_mean(5 * s + 1, 4 * s);
  mp::cpp_rational value = pow_rational(qual_mean, p) *
                           (pow_rational(mp::cpp_rational(11, 8), q) -
                            pow_rational(mp::cpp_rational(4, 3), q));
  mp::cpp_rational residual_sum = 0;
  for (int k = 1; k <= p + q; ++k) {
    mp::cpp_rational level_k = 0;
    for (int k1 = std::max(0, k - q); k1 <= std::min(k, p); ++k1) {
      const int k2 = k - k1;
      const mp::cpp_int cells = mp::pow(mp::cpp_int(s), static_cast<unsigned>(k1)) *
                                mp::pow(mp::cpp_int(2), static_cast<unsigned>(k2));
      const mp::cpp_int r = mp::cpp_int(n) % cells;
      if (r == 0) continue;
      level_k += mp::cpp_rational(binomial(p, k1) * binomial(q, k2) * r * (cells - r), cells);
    }
    residual_sum += level_k / mp::pow(mp::cpp_int(5), static_cast<unsigned>(k));
  }
  value += pow_rational(mp::cpp_rational(5, 4), p + q) * residual_sum /
           (mp::cpp_int(n) * mp::cpp_int(n));
  return value.convert_to<double>();
}

const char* to_string(BoundSource source) noexcept {
  switch (source) {
    case BoundSource::kLb1: return "LB1";
    case BoundSource::kLb2: return "LB2";
    case BoundSource::kTie: return "LB1=LB2";
  }
  return "?";
}

LowerBound lb(const DesignSpec& spec) {
  LowerBound out{lb1(spec), BoundSource::kLb1, 0.0, std::nullopt, {}};
  out.lb1 = out.value;

  const int p = spec.qualitative();
  const auto& levels = spec.levels();
  const bool quantitative_two_level =
      std::all_of(levels.begin() + p, levels.end(), [](int s) { return s == 2; });
  const bool qualitative_symmetric =
      std::all_of(levels.begin(), levels.begin() + p, [&](int s) { return s == levels[0]; });
  if (!quantitative_two_level) {
    out.lb2_note = "LB2 needs 2-level quantitative factors";
  } else if (!qualitative_symmetric) {
    out.lb2_note = "LB2 needs a common level count for qualitative factors";
  } else {
    const int s = p > 0 ? levels[0] : 2;
    out.lb2 = lb2(spec.runs(), p, spec.quantitative(), s);
    if (*out.lb2 > out.value) {
      out.value = *out.lb2;
      out.source = BoundSource::kLb2;
    } else if (*out.lb2 == out.value) {
      out.source = BoundSource::kTie;
    }
  }
  return out;
}

double full_factorial_qqd(const DesignSpec& spec, const CriterionConfig& config) {
  config.validate();
  double qual = 1.0;
  for (int k = 0; k < spec.qualitative(); ++k) {
    const double s = spec.levels(k);
    qual *= (config.a + (s - 1.0) * config.b) / s;
  }
  double quant = 1.0;
  for (int k = spec.qualitative(); k < spec.factors(); ++k) {
    const double s = spec.levels(k);
    quant *= 4.0 / 3.0 + 1.0 / (6.0 * s * s);
  }
  return qual * (quant - std::pow(4.0 / 3.0, spec.quantitative()));
}

}  // namespace qqd
