#include "qqd/balance.hpp"

#include <algorithm>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qqd/error.hpp"

namespace qqd {

namespace mp = boost::multiprecision;

namespace {

struct Shape {
  int n;
  int p;
  int q;
  int s1;  // qualitative level count
  int s2;  // quantitative level count
};

// Checks U(n, s1^p s2^q) membership and returns the integer level matrix.
Shape admissible_shape(const Design& design, Matrix<int>& levels) {
  const auto& spec = design.spec();
  const int p = spec.qualitative();
  const int q = spec.quantitative();
  if (spec.factors() > kMaxBalanceFactors) {
    throw CapacityError("balance pattern enumerates column subsets; p + q must be <= " +
                        std::to_string(kMaxBalanceFactors));
  }
  const auto& s = spec.levels();
  const int s1 = p > 0 ? s[0] : 1;
  const int s2 = q > 0 ? s[static_cast<std::size_t>(p)] : 1;
  if (!std::all_of(s.begin(), s.begin() + p, [&](int v) { return v == s1; }) ||
      !std::all_of(s.begin() + p, s.end(), [&](int v) { return v == s2; })) {
    throw DomainError("balance pattern needs one level count per factor type, U(n, s1^p s2^q)");
  }
  const UTypeReport report = validate_utype(design);
  if (!report.passed) {
    throw DomainError("balance pattern needs a U-type design: " + report.defects.front().message);
  }
  levels = lattice_levels(design);
  return {spec.runs(), p, q, s1, s2};
}

mp::cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mp::cpp_int out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

mp::cpp_int cell_count(const Shape& shape, int k1, int k2) {
  return mp::pow(mp::cpp_int(shape.s1), static_cast<unsigned>(k1)) *
         mp::pow(mp::cpp_int(shape.s2), static_cast<unsigned>(k2));
}

// Exact component for a subset: sum over all combinations of (c - n/M)^2,
// with unobserved combinations contributing (n/M)^2 each.
mp::cpp_rational component_exact(const Shape& shape, const Matrix<int>& levels,
                                  const std::vector<int>& columns) {
  int k1 = 0;
  for (int c : columns) k1 += c < shape.p ? 1 : 0;
  const int k2 = static_cast<int>(columns.size()) - k1;
  const mp::cpp_int cells = cell_count(shape, k1, k2);

  std::vector<std::vector<int>> projected(static_cast<std::size_t>(shape.n));
  for (int i = 0; i < shape.n; ++i) {
    auto& row = projected[static_cast<std::size_t>(i)];
    row.reserve(columns.size());
    for (int c : columns) row.push_back(levels(i, c));
  }
  std::sort(projected.begin(), projected.end());

  mp::cpp_int numerator = 0;  // sum (M c - n)^2 over all M cells
  mp::cpp_int observed = 0;
  for (std::size_t i = 0; i < projected.size();) {
    std::size_t j = i;
    while (j < projected.size() && projected[j] == projected[i]) ++j;
    const mp::cpp_int dev = cells * static_cast<long long>(j - i) - shape.n;
    numerator += dev * dev;
    ++observed;
    i = j;
  }
  numerator += (cells - observed) * mp::cpp_int(shape.n) * shape.n;
  return mp::cpp_rational(numerator, cells * cells);
}

std::vector<mp::cpp_rational> subset_form_exact(const Shape& shape, const Matrix<int>& levels,
                                                BalancePattern* out) {
  const int m = shape.p + shape.q;
  std::vector<mp::cpp_rational> sums(static_cast<std::size_t>(m), 0);
  const std::uint32_t subsets = std::uint32_t{1} << m;
  std::vector<int> columns;
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    columns.clear();
    for (int c = 0; c < m; ++c) {
      if (mask & (std::uint32_t{1} << c)) columns.push_back(c);
    }
    const mp::cpp_rational b = component_exact(shape, levels, columns);
    sums[columns.size() - 1] += b;
    if (out) out->components.emplace(columns, b.convert_to<double>());
  }
  for (int k = 1; k <= m; ++k) sums[static_cast<std::size_t>(k - 1)] /= binomial(m, k);
  return sums;
}

std::vector<mp::cpp_rational> row_form_exact(const Shape& shape, const Matrix<int>& levels) {
  const int m = shape.p + shape.q;
  // agreements[k] = sum over ordered pairs of the number of k-subsets on
  // which the pair agrees
  std::vector<mp::cpp_int> agreements(static_cast<std::size_t>(m) + 1, 0);
  std::vector<std::vector<std::uint64_t>> choose(static_cast<std::size_t>(m) + 1);
  for (int a = 0; a <= m; ++a) {
    choose[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(m) + 1, 0);
    for (int b = 0; b <= a; ++b) {
      choose[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          binomial(a, b).convert_to<std::uint64_t>();
    }
  }
  // histogram of (qualitative agreements, quantitative agreements)
  std::vector<std::uint64_t> pairs(static_cast<std::size_t>((shape.p + 1) * (shape.q + 1)), 0);
  for (int i = 0; i < shape.n; ++i) {
    for (int j = 0; j < shape.n; ++j) {
      int a1 = 0;
      int a2 = 0;
      for (int c = 0; c < m; ++c) {
        if (levels(i, c) == levels(j, c)) (c < shape.p ? a1 : a2) += 1;
      }
      ++pairs[static_cast<std::size_t>(a1 * (shape.q + 1) + a2)];
    }
  }
  for (int a1 = 0; a1 <= shape.p; ++a1) {
    for (int a2 = 0; a2 <= shape.q; ++a2) {
      const std::uint64_t count = pairs[static_cast<std::size_t>(a1 * (shape.q + 1) + a2)];
      if (count == 0) continue;
      for (int k1 = 0; k1 <= a1; ++k1) {
        for (int k2 = 0; k2 <= a2; ++k2) {
          if (k1 + k2 == 0) continue;
          agreements[static_cast<std::size_t>(k1 + k2)] +=
              mp::cpp_int(count) * choose[static_cast<std::size_t>(a1)][static_cast<std::size_t>(k1)] *
              choose[static_cast<std::size_t>(a2)][static_cast<std::size_t>(k2)];
        }
      }
    }
  }
  std::vector<mp::cpp_rational> out(static_cast<std::size_t>(m), 0);
  const mp::cpp_int nn = mp::cpp_int(shape.n) * shape.n;
  for (int k = 1; k <= m; ++k) {
    mp::cpp_rational expected = 0;
    for (int k1 = std::max(0, k - shape.q); k1 <= std::min(k, shape.p); ++k1) {
      const int k2 = k - k1;
      expected += mp::cpp_rational(binomial(shape.p, k1) * binomial(shape.q, k2) * nn,
                                   cell_count(shape, k1, k2));
    }
    out[static_cast<std::size_t>(k - 1)] =
        (mp::cpp_rational(agreements[static_cast<std::size_t>(k)]) - expected) / binomial(m, k);
  }
  return out;
}

std::vector<double> to_doubles(const std::vector<mp::cpp_rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.convert_to<double>());
  return out;
}

}  // namespace

double balance_component(const Design& design, const std::vector<int>& columns) {
  Matrix<int> levels;
  const Shape shape = admissible_shape(design, levels);
  if (columns.empty()) throw DomainError("balance component needs at least one column");
  std::vector<int> sorted = columns;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
      sorted.back() >= shape.p + shape.q) {
    throw DomainError("balance component needs distinct column indices in range");
  }
  return component_exact(shape, levels, sorted).convert_to<double>();
}

BalancePattern balance_pattern(const Design& design) {
  Matrix<int> levels;
  const Shape shape = admissible_shape(design, levels);
  BalancePattern out;
  out.aggregate = to_doubles(subset_form_exact(shape, levels, &out));
  return out;
}

BalancePattern balance_pattern_rowform(const Design& design) {
  Matrix<int> levels;
  const Shape shape = admissible_shape(design, levels);
  BalancePattern out;
  out.aggregate = to_doubles(row_form_exact(shape, levels));
  return out;
}

double qqd_from_balance(const Design& design) {
  Matrix<int> levels;
  const Shape shape = admissible_shape(design, levels);
  if (shape.q > 0 && shape.s2 != 2) {
    throw DomainError("balance form of the QQD holds only for 2-level quantitative factors, got " +
                      std::to_string(shape.s2) + " levels");
  }
  const int m = shape.p + shape.q;
  const auto pattern = subset_form_exact(shape, levels, nullptr);
  auto power = [](const mp::cpp_rational& base, int e) {
    mp::cpp_rational out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
  };
  const int s = shape.s1;
  const mp::cpp_rational qual_mean(5 * s + 1, 4 * s);
  mp::cpp_rational value = power(qual_mean, shape.p) * (power(mp::cpp_rational(11, 8), shape.q) -
                                                        power(mp::cpp_rational(4, 3), shape.q));
  mp::cpp_rational tail = 0;
  for (int k = 1; k <= m; ++k) {
    tail += power(mp::cpp_rational(1, 5), k) * binomial(m, k) * pattern[static_cast<std::size_t>(k - 1)];
  }
  value += power(mp::cpp_rational(5, 4), m) * tail / (mp::cpp_int(shape.n) * shape.n);
  return value.convert_to<double>();
}

}  // namespace qqd
