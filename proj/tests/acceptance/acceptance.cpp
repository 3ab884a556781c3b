// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "qqd/balance.hpp"
#include "qqd/bounds.hpp"
#include "qqd/discrepancy.hpp"
#include "qqd/reference_designs.hpp"
#include "qqd/search.hpp"

namespace {

using namespace qqd;
namespace ref = qqd::reference;

constexpr double kPublishedTol = 5e-5;
constexpr double kLargeTol = 5e-4;
constexpr double kCrossTol = 1e-10;
constexpr double kBalanceTol = 1e-12;
constexpr double kExhaustiveTol = 1e-9;
constexpr double kKernelTol = 1e-12;

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(7);
    s << what << " got " << got << " want " << want;
    expect(std::abs(got - want) < tol, s.str());
  }
  void note(const std::string& text) { notes_ += (notes_.empty() ? "" : ", ") + text; }
  bool pass() const { return pass_; }
  std::string detail() const { return pass_ ? notes_ : failures_; }

 private:
  bool pass_ = true;
  std::string failures_;
  std::string notes_;
};

std::string fmt(double v, int digits = 6) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void ac1(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const double d1 = qqd_squared(ref::mcd8_diagonal());
  const double d2 = qqd_squared(ref::mcd8_staggered());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.near(d1, 0.0213, kPublishedTol, "D1");
  c.near(d2, 0.0164, kPublishedTol, "D2");
  c.expect(seconds < 1.0, "runtime " + std::to_string(seconds) + " s");
  c.note("D1 " + fmt(d1) + ", D2 " + fmt(d2) + ", " + std::to_string(seconds * 1e3) + " ms");
}

void ac2(Check& c) {
  const Design designs[] = {ref::mcd16_columns23(), ref::mcd16_columns24(), ref::mcd16_columns34()};
  const double expected[] = {0.0066, 0.0063, 0.0060};
  for (int i = 0; i < 3; ++i) {
    const double v = qqd_squared(designs[i]);
    c.near(v, expected[i], kPublishedTol, "design " + std::to_string(i + 1));
    c.expect(is_mcd(designs[i]).is_mcd, "design " + std::to_string(i + 1) + " not an MCD");
    c.note(fmt(v));
  }
}

void ac3(Check& c) {
  const Design d1 = ref::juxtaposed16_ordered();
  const Design d2 = ref::juxtaposed16_permuted();
  const Design d2t = ref::juxtaposed16_aliased();
  const double q1 = qqd_squared(d1);
  const double q2 = qqd_squared(d2);
  const double q2t = qqd_squared(d2t);
  c.near(q1, 0.0822, kPublishedTol, "D1");
  c.near(q2, 0.0545, kPublishedTol, "D2");
  c.near(q2t, 0.0813, kPublishedTol, "D2~");

  int matching = 0;
  std::string matched;
  for (SwdMode mode : {SwdMode::kWd, SwdMode::kWdSquared}) {
    const double s2 = swd(d2, mode, SwdLattice::kEndpoint);
    const double s2t = swd(d2t, mode, SwdLattice::kEndpoint);
    if (std::abs(s2 - 1.1055) < kPublishedTol && std::abs(s2t - 1.0999) < kPublishedTol) {
      ++matching;
      matched = to_string(mode);
      c.expect(s2t < s2, "SWD ordering");
    }
  }
  c.expect(matching == 1, "SWD matched " + std::to_string(matching) + " modes");
  c.expect(q2t > q2, "QQD ordering");
  c.note(fmt(q1) + "/" + fmt(q2) + "/" + fmt(q2t) + ", SWD mode " + matched + " (endpoint lattice)");
}

void ac4(Check& c) {
  const double bound = lb2(4, 1, 2, 4);
  const double value = qqd_squared(ref::lb2_attaining4());
  c.near(bound, 0.1706, kPublishedTol, "LB2");
  c.near(value, 0.1706, kPublishedTol, "design");
  c.near(value, bound, kPublishedTol, "design vs LB2");
  const LowerBound combined = lb(ref::lb2_attaining4().spec());
  c.expect(combined.source == BoundSource::kLb2 && bound > combined.lb1, "LB tag is not LB2");

  SearchConfig config;
  config.budget = 10'000;
  const SearchResult r = search_uniform(ref::lb2_attaining4().spec(), config);
  c.expect(r.terminated_by == Termination::kBound, "search did not stop at the bound");
  c.expect(r.best_value <= bound + config.bound_tol, "search value " + fmt(r.best_value));
  c.note("LB2 " + fmt(bound) + ", search " + fmt(r.best_value) + " after " + std::to_string(r.iterations) +
         " iterations");
}

void ac5(Check& c) {
  const Design d = ref::lb1_attaining8();
  const double bound = lb1(d.spec());
  const double value = qqd_squared(d);
  c.near(bound, 17.0235, kLargeTol, "LB1");
  c.near(value, 17.0235, kLargeTol, "design");
  c.note("LB1 " + fmt(bound) + ", design " + fmt(value));
}

void ac6(Check& c) {
  const double parts[] = {0.2255, 0.2255, 0.1766, 0.1571};
  const double full[] = {0.0763, 0.0795, 0.0792, 0.0653};
  std::string values;
  for (int v = 1; v <= 4; ++v) {
    const double x = qqd_squared(ref::ccd_factorial_part(v));
    c.near(x, parts[v - 1], kPublishedTol, "factorial part " + std::to_string(v));
    values += fmt(x, 4) + " ";
  }
  for (int v = 1; v <= 4; ++v) {
    const double x = qqd_squared(ref::ccd_full(v));
    c.near(x, full[v - 1], kPublishedTol, "full design " + std::to_string(v));
    values += fmt(x, 4) + (v < 4 ? " " : "");
  }
  c.note(values);
}

std::vector<test::SpecShape> balance_specs() {
  return {{4, 1, {4, 2, 2}}, {8, 1, {4, 2, 2, 2}}, {8, 2, {2, 2, 2}}, {12, 2, {3, 3, 2, 2}}, {16, 1, {4, 2, 2, 2, 2}}};
}

void ac7(Check& c) {
  std::mt19937_64 gen(7001);
  int quadratic = 0;
  double worst = 0.0;
  for (const auto& shape : test::property_specs()) {
    for (int t = 0; t < 10; ++t, ++quadratic) {
      const Design d = test::to_design(test::random_table(shape.n, shape.p, shape.levels, gen));
      worst = std::max(worst, std::abs(qqd_squared(d) - qqd_squared_quadratic(d)));
    }
  }
  c.expect(worst < kCrossTol, "quadratic form diff " + std::to_string(worst));
  c.expect(quadratic >= 200 && test::property_specs().size() >= 10, "too few quadratic-form designs");

  int balance = 0;
  double worst_balance = 0.0;
  bool rowform_equal = true;
  for (const auto& shape : balance_specs()) {
    for (int t = 0; t < 25; ++t, ++balance) {
      const Design d = test::to_design(test::random_table(shape.n, shape.p, shape.levels, gen));
      worst_balance = std::max(worst_balance, std::abs(qqd_squared(d) - qqd_from_balance(d)));
      rowform_equal = rowform_equal && balance_pattern_rowform(d).aggregate == balance_pattern(d).aggregate;
    }
  }
  c.expect(worst_balance < kBalanceTol, "balance form diff " + std::to_string(worst_balance));
  c.expect(balance >= 100, "too few balance designs");
  c.expect(rowform_equal, "row form differs from subset form");
  std::ostringstream s;
  s << quadratic << " designs max diff " << worst << "; " << balance << " designs max diff " << worst_balance
    << "; row form exact";
  c.note(s.str());
}

void ac8(Check& c) {
  std::mt19937_64 gen(8001);
  int designs = 0;
  auto specs = test::property_specs();
  for (const auto& shape : balance_specs()) specs.push_back(shape);
  double slack = INFINITY;
  for (const auto& shape : specs) {
    const DesignSpec spec(shape.n, shape.p, static_cast<int>(shape.levels.size()) - shape.p, shape.levels);
    const double bound = lb(spec).value;
    for (int t = 0; t < 25; ++t, ++designs) {
      const Design d = test::to_design(test::random_table(shape.n, shape.p, shape.levels, gen));
      slack = std::min(slack, qqd_squared(d) - bound);
    }
  }
  c.expect(slack >= -1e-10, "dominance violated by " + std::to_string(slack));
  c.expect(designs >= 500, "too few dominance designs");

  const DesignSpec tiny(4, 1, 1, {2, 2});
  const ExhaustiveResult ex = exhaustive_uniform(tiny);
  c.near(ex.optimum, 0.057292, kExhaustiveTol + 5e-7, "exhaustive optimum (6 d.p.)");
  c.near(ex.optimum, 11.0 / 192.0, kExhaustiveTol, "exhaustive optimum");
  const auto counts = frequency_vector(ex.design).counts;
  c.expect(std::all_of(counts.begin(), counts.end(), [](auto v) { return v == 1; }),
           "optimum not a full factorial");
  c.near(qqd_squared(full_factorial(tiny.with_runs(1), 1)), ex.optimum, kExhaustiveTol, "full factorial value");

  double worst = 0.0;
  for (const auto& shape : test::property_specs()) {
    const DesignSpec spec(1, shape.p, static_cast<int>(shape.levels.size()) - shape.p, shape.levels);
    const double formula = full_factorial_qqd(spec);
    for (int rep : {1, 2, 3}) worst = std::max(worst, std::abs(qqd_squared(full_factorial(spec, rep)) - formula));
  }
  c.expect(worst < kCrossTol, "full factorial formula diff " + std::to_string(worst));
  std::ostringstream s;
  s << designs << " designs min slack " << slack << "; exhaustive " << fmt(ex.optimum) << " (" << ex.optimal_count
    << " optima); repetitions max diff " << worst;
  c.note(s.str());
}

void ac9(Check& c) {
  double worst = 0.0;
  for (int s = 2; s <= 12; ++s) {
    const DesignSpec spec(s, 1, 1, {s, s});
    for (int k = 0; k < 2; ++k) {
      const KernelFactor f = kernel_matrix(k, spec);
      const double expected = k == 0 ? 1.5 + 1.25 * (s - 1) : 4.0 * s / 3.0 + 1.0 / (6.0 * s);
      for (int i = 0; i < s; ++i) {
        double sum = 0.0;
        for (int j = 0; j < s; ++j) sum += f.entries(i, j);
        worst = std::max(worst, std::abs(sum - expected));
      }
    }
  }
  c.expect(worst < kKernelTol, "row sum diff " + std::to_string(worst));

  std::mt19937_64 gen(9001);
  double worst_wrap = 0.0;
  for (const auto& shape : test::property_specs()) {
    const test::LevelTable t = test::random_table(shape.n, shape.p, shape.levels, gen);
    const double base = qqd_squared(test::to_design(t));
    for (int k = shape.p; k < static_cast<int>(shape.levels.size()); ++k) {
      const int s = shape.levels[k];
      test::LevelTable reflected = t;
      test::LevelTable shifted = t;
      for (auto& row : reflected.rows) row[k] = s - 1 - row[k];
      for (auto& row : shifted.rows) row[k] = (row[k] + 1) % s;
      worst_wrap = std::max(worst_wrap, std::abs(qqd_squared(test::to_design(reflected)) - base));
      worst_wrap = std::max(worst_wrap, std::abs(qqd_squared(test::to_design(shifted)) - base));
    }
  }
  c.expect(worst_wrap < kKernelTol, "wrap symmetry diff " + std::to_string(worst_wrap));
  std::ostringstream s;
  s << "row sums max diff " << worst << "; wrap symmetries max diff " << worst_wrap;
  c.note(s.str());
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"AC1 eight-run MCD values", ac1},      {"AC2 sixteen-run MCD values", ac2},
      {"AC3 juxtaposed designs and SWD", ac3}, {"AC4 balance-pattern bound", ac4},
      {"AC5 geometric-mean bound", ac5},      {"AC6 CCD designs", ac6},
      {"AC7 cross-form suite", ac7},          {"AC8 bound and optimality suite", ac8},
      {"AC9 kernel invariant suite", ac9},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check check;
    try {
      run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", check.pass() ? "PASS" : "FAIL", name.c_str(), check.detail().c_str());
    failed += check.pass() ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
