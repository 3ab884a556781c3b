#pragma once

#include <optional>
#include <string>

#include "qqd/design.hpp"

namespace qqd {

// Lower bounds on the squared QQD of U-type designs (default kernel a = 3/2,
// b = 5/4). Every function here rejects specs whose level counts do not divide
// the run count.

/// Geometric-mean bound over the off-diagonal kernel products. Works for any
/// mix of level counts; odd and even quantitative factors contribute
/// different products, so factor order does not matter.
double lb1(const DesignSpec& spec);

/// lb1 specialised to p factors with s1 levels and q factors with s2 levels,
/// written out directly for odd and even s2.
double lb_symmetric(int n, int p, int q, int s1, int s2);

/// Balance-pattern bound for D1 in U(n, s^p) and D2 in U(n, 2^q). Residuals of
/// n modulo s^k1 2^k2 are taken in arbitrary-width integers and the whole
/// expression is evaluated in exact rationals.
double lb2(int n, int p, int q, int s);

enum class BoundSource { kLb1, kLb2, kTie };

const char* to_string(BoundSource source) noexcept;

struct LowerBound {
  double value;
  BoundSource source;
  double lb1;
  std::optional<double> lb2;
  std::string lb2_note;  // why lb2 is absent
};

/// max(lb1, lb2) with lb2 used only when the spec has the s^p 2^q shape.
LowerBound lb(const DesignSpec& spec);

/// Squared QQD of any full factorial (or repetition of one) for the spec's
/// factors; does not depend on the run count.
double full_factorial_qqd(const DesignSpec& spec, const CriterionConfig& config = {});

}  // namespace qqd
