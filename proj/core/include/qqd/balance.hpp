#pragma once

#include <map>
#include <vector>

#include "qqd/design.hpp"

namespace qqd {

/// Balance pattern of a design in U(n, s1^p s2^q).
///
/// components[{l1,...,lk}] is the squared deviation of the k-column level
/// combination counts from n / (s1^k1 s2^k2); it vanishes exactly when those
/// columns form an orthogonal array of strength k. aggregate[k-1] is the mean
/// of the components over all k-column subsets.
struct BalancePattern {
  std::map<std::vector<int>, double> components;
  std::vector<double> aggregate;
};

/// Largest p + q for which subsets are enumerated.
inline constexpr int kMaxBalanceFactors = 24;

/// Squared deviation for one column subset (0-based factor indices).
double balance_component(const Design& design, const std::vector<int>& columns);

/// Subset form: enumerates every column subset and counts level combinations.
BalancePattern balance_pattern(const Design& design);

/// Row form: counts, for every ordered row pair, the column subsets on which
/// the two rows agree. Fills `aggregate` only.
BalancePattern balance_pattern_rowform(const Design& design);

/// Squared QQD rebuilt from the balance pattern; needs D1 in U(n, s^p) and
/// D2 in U(n, 2^q).
double qqd_from_balance(const Design& design);

}  // namespace qqd
