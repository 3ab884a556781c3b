#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numeric code; designs are taken as integer level tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qqd/design.hpp"

namespace qqd::test {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Rows of integer levels, qualitative columns first.
struct LevelTable {
  int p = 0;
  std::vector<int> levels;
  std::vector<std::vector<int>> rows;

  int q() const { return static_cast<int>(levels.size()) - p; }
  int n() const { return static_cast<int>(rows.size()); }
};

inline Rational midpoint(int level, int s) { return Rational(2 * level + 1, 2 * s); }

/// QQD^2 straight from the pairwise definition in exact arithmetic, on the
/// midpoint lattice, with qualitative kernel a (equal) / b (different).
inline Rational exact_qqd(const LevelTable& t, Rational a = Rational(3, 2),
                          Rational b = Rational(5, 4)) {
  Rational constant = -1;
  for (int k = 0; k < t.p; ++k) constant *= (a + (t.levels[k] - 1) * b) / t.levels[k];
  for (int k = t.p; k < static_cast<int>(t.levels.size()); ++k) constant *= Rational(4, 3);

  Rational total = 0;
  for (const auto& x : t.rows) {
    for (const auto& y : t.rows) {
      Rational term = 1;
      for (int k = 0; k < t.p; ++k) term *= x[k] == y[k] ? a : b;
      for (int k = t.p; k < static_cast<int>(t.levels.size()); ++k) {
        Rational d = midpoint(x[k], t.levels[k]) - midpoint(y[k], t.levels[k]);
        if (d < 0) d = -d;
        term *= Rational(3, 2) - d + d * d;
      }
      total += term;
    }
  }
  return constant + total / (t.n() * t.n());
}

/// Full-factorial value: every combination once, by brute enumeration.
inline LevelTable full_factorial_table(int p, const std::vector<int>& levels, int reps = 1) {
  LevelTable t{p, levels, {}};
  std::vector<int> combo(levels.size(), 0);
  while (true) {
    for (int r = 0; r < reps; ++r) t.rows.push_back(combo);
    int k = static_cast<int>(levels.size()) - 1;
    for (; k >= 0; --k) {
      if (++combo[k] < levels[k]) break;
      combo[k] = 0;
    }
    if (k < 0) break;
  }
  return t;
}

/// Composite Simpson rule on [lo, hi]; exact for cubics.
template <typename F>
double simpson(F f, double lo, double hi, int panels = 2) {
  const double h = (hi - lo) / (2 * panels);
  double sum = f(lo) + f(hi);
  for (int i = 1; i < 2 * panels; ++i) sum += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Integral over y in [0, 1] of the quantitative kernel at fixed x, split at
/// the kink y = x so that each piece is a polynomial.
inline double kernel_row_integral(double x) {
  auto k = [x](double y) {
    const double d = std::abs(x - y);
    return 1.5 - d + d * d;
  };
  return simpson(k, 0.0, x) + simpson(k, x, 1.0);
}

inline double kernel_double_integral() { return simpson(kernel_row_integral, 0.0, 1.0, 8); }

/// Random U-type level table with a generator independent of the library.
inline LevelTable random_table(int n, int p, const std::vector<int>& levels, std::mt19937_64& gen) {
  LevelTable t{p, levels, std::vector<std::vector<int>>(static_cast<std::size_t>(n),
                                                        std::vector<int>(levels.size()))};
  for (std::size_t k = 0; k < levels.size(); ++k) {
    std::vector<int> col(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = i % levels[k];
    std::shuffle(col.begin(), col.end(), gen);
    for (int i = 0; i < n; ++i) t.rows[static_cast<std::size_t>(i)][k] = col[static_cast<std::size_t>(i)];
  }
  return t;
}

inline Design to_design(const LevelTable& t) {
  const int n = t.n();
  const int m = static_cast<int>(t.levels.size());
  const DesignSpec spec(n, t.p, m - t.p, t.levels);
  Matrix<int> qual(static_cast<std::size_t>(n), static_cast<std::size_t>(t.p));
  Matrix<int> quant(static_cast<std::size_t>(n), static_cast<std::size_t>(m - t.p));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) {
      const int v = t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (k < t.p) {
        qual(i, k) = v;
      } else {
        quant(i, k - t.p) = v;
      }
    }
  }
  return design_from_levels(spec, qual, quant);
}

struct SpecShape {
  int n;
  int p;
  std::vector<int> levels;
};

/// Specs with N <= 1e4 used by the randomized suites.
inline std::vector<SpecShape> property_specs() {
  return {
      {4, 1, {2, 2}},          {4, 1, {4, 2, 2}},       {6, 1, {2, 3}},
      {6, 1, {3, 2, 6}},       {8, 1, {2, 8, 8}},       {8, 2, {2, 4, 2, 4}},
      {8, 1, {4, 2, 2, 2}},    {9, 2, {3, 3, 3}},       {10, 1, {2, 5, 5}},
      {12, 1, {3, 4, 6}},      {12, 2, {2, 3, 4, 6}},   {16, 2, {2, 2, 4, 4}},
      {16, 1, {4, 2, 2, 2, 2}}, {12, 0, {3, 4, 12}},    {8, 3, {2, 2, 4}},
      {18, 1, {3, 6, 9}},      {20, 1, {2, 5, 10}},     {16, 1, {2, 16, 16}},
      {24, 1, {4, 6, 8}},      {27, 1, {3, 9, 9}},      {5, 0, {5, 5}},
  };
}

}  // namespace qqd::test
