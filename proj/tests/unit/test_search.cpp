#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "oracle.hpp"
#include "qqd/bounds.hpp"
#include "qqd/discrepancy.hpp"
#include "qqd/error.hpp"
#include "qqd/reference_designs.hpp"
#include "qqd/search.hpp"

namespace qqd {
namespace {

std::vector<int> flatten(const Design& d) {
  const Matrix<int> levels = lattice_levels(d);
  return levels.data();
}

bool is_full_factorial(const Design& d) {
  const auto counts = frequency_vector(d).counts;
  return std::all_of(counts.begin(), counts.end(), [&](auto c) { return c == counts.front(); });
}

TEST(RandomUtype, BalancedAndDeterministic) {
  const DesignSpec spec(8, 1, 2, {2, 8, 8});
  const Design d = random_utype(spec, 42);
  EXPECT_TRUE(validate_utype(d).passed);
  EXPECT_EQ(random_utype(spec, 42), d);
  EXPECT_NE(random_utype(spec, 43), d);
  EXPECT_THROW(random_utype(DesignSpec(6, 1, 1, {4, 2}), 1), DomainError);
}

TEST(RandomUtype, CoversEveryLabelledDesign) {
  // 6 balanced columns per factor, 36 labelled designs, 3 row multisets
  const DesignSpec spec(4, 1, 1, {2, 2});
  std::set<std::vector<int>> labelled;
  std::set<std::vector<int>> unordered;
  Rng rng(2024);
  for (int draw = 0; draw < 1000; ++draw) {
    const Design d = random_utype(spec, rng);
    ASSERT_TRUE(validate_utype(d).passed);
    const auto flat = flatten(d);
    labelled.insert(flat);
    std::vector<int> rows;
    for (std::size_t i = 0; i < 4; ++i) rows.push_back(flat[2 * i] * 2 + flat[2 * i + 1]);
    std::sort(rows.begin(), rows.end());
    unordered.insert(rows);
  }
  EXPECT_EQ(labelled.size(), 36u);
  EXPECT_EQ(unordered.size(), 3u);
}

TEST(SearchConfig, Validation) {
  const DesignSpec spec(4, 1, 2, {4, 2, 2});
  SearchConfig c;
  c.restarts = 0;
  EXPECT_THROW(search_uniform(spec, c), DomainError);
  c = {};
  c.threshold_schedule = {0.1, 0.01};
  EXPECT_THROW(search_uniform(spec, c), DomainError);
  c.threshold_schedule = {0.01, 0.1, 0.0};
  EXPECT_THROW(search_uniform(spec, c), DomainError);
  c.threshold_schedule = {-0.1, 0.0};
  EXPECT_THROW(search_uniform(spec, c), DomainError);
  c = {};
  c.criterion.b = 2.0;
  EXPECT_THROW(search_uniform(spec, c), DomainError);
  EXPECT_THROW(search_uniform(DesignSpec(6, 1, 1, {4, 2})), DomainError);
}

TEST(SearchUniform, ReachesBalancePatternBound) {
  const DesignSpec spec(4, 1, 2, {4, 2, 2});
  SearchConfig c;
  c.budget = 10'000;
  const SearchResult r = search_uniform(spec, c);
  EXPECT_NEAR(r.best_value, 0.1706, 5e-5);
  EXPECT_EQ(r.terminated_by, Termination::kBound);
  EXPECT_EQ(r.bound.source, BoundSource::kLb2);
  EXPECT_GE(r.gap, -c.bound_tol);
}

TEST(SearchUniform, FindsFullFactorialWhenRunsEqualCombinations) {
  for (const auto& levels : {std::vector<int>{2, 2}, {3, 2}, {2, 2, 2}, {2, 4}}) {
    const int n = std::accumulate(levels.begin(), levels.end(), 1, std::multiplies<>());
    const DesignSpec spec(n, 1, static_cast<int>(levels.size()) - 1, levels);
    SearchConfig c;
    c.budget = 5'000;
    c.stop_at_bound = false;
    const SearchResult r = search_uniform(spec, c);
    EXPECT_NEAR(r.best_value, full_factorial_qqd(spec), 1e-10) << spec.to_string();
    EXPECT_TRUE(is_full_factorial(r.best_design));
  }
}

TEST(SearchUniform, BeatsPublishedEightRunMcd) {
  SearchConfig c;
  c.budget = 20'000;
  c.restarts = 2;
  const SearchResult r = search_uniform(DesignSpec(8, 1, 2, {2, 8, 8}), c);
  EXPECT_LE(r.best_value, qqd_squared(reference::mcd8_staggered()) + 1e-12);
}

TEST(SearchUniform, ZeroBudgetReturnsInitialDesign) {
  const DesignSpec spec(12, 1, 2, {3, 4, 6});
  SearchConfig c;
  c.budget = 0;
  c.seed = 9;
  const SearchResult r = search_uniform(spec, c);
  EXPECT_EQ(r.best_design, random_utype(spec, c.seed ^ Rng::mix(0)));
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(SearchUniform, ResultInvariants) {
  std::mt19937_64 gen(8);
  for (const auto& shape : test::property_specs()) {
    const int m = static_cast<int>(shape.levels.size());
    const DesignSpec spec(shape.n, shape.p, m - shape.p, shape.levels);
    SearchConfig c;
    c.budget = 2'000;
    c.restarts = 2;
    c.seed = gen();
    const SearchResult r = search_uniform(spec, c);
    EXPECT_TRUE(validate_utype(r.best_design).passed);
    EXPECT_NEAR(r.best_value, qqd_squared(r.best_design), 1e-15);
    EXPECT_LT(std::abs(r.tracked_value - r.best_value), 1e-9);
    EXPECT_GE(r.gap, -c.bound_tol);
    for (std::size_t t = 1; t < r.trace.size(); ++t) {
      EXPECT_LT(r.trace[t].value, r.trace[t - 1].value);
      EXPECT_GT(r.trace[t].iteration, r.trace[t - 1].iteration);
    }
    EXPECT_NEAR(r.trace.back().value, r.tracked_value, 1e-15);
  }
}

TEST(SearchUniform, DeterministicAcrossThreading) {
  const DesignSpec spec(16, 2, 2, {2, 2, 4, 4});
  SearchConfig c;
  c.budget = 3'000;
  c.restarts = 4;
  c.seed = 77;
  c.stop_at_bound = false;
  const SearchResult a = search_uniform(spec, c);
  const SearchResult b = search_uniform(spec, c);
  c.parallel = false;
  const SearchResult s = search_uniform(spec, c);
  for (const SearchResult* other : {&b, &s}) {
    EXPECT_EQ(other->best_design, a.best_design);
    EXPECT_EQ(other->best_value, a.best_value);
    EXPECT_EQ(other->best_restart, a.best_restart);
    EXPECT_EQ(other->iterations, a.iterations);
    ASSERT_EQ(other->trace.size(), a.trace.size());
    for (std::size_t t = 0; t < a.trace.size(); ++t) EXPECT_EQ(other->trace[t].value, a.trace[t].value);
  }
}

TEST(SearchUniform, ScheduleCanEndBeforeBudget) {
  const DesignSpec spec(16, 2, 2, {2, 2, 4, 4});
  SearchConfig c;
  c.budget = 10'000;
  c.threshold_schedule = {0.001, 0.0};
  c.iterations_per_threshold = 100;
  c.stop_at_bound = false;
  const SearchResult r = search_uniform(spec, c);
  EXPECT_EQ(r.terminated_by, Termination::kSchedule);
  EXPECT_EQ(r.iterations, 200u);
  c.iterations_per_threshold = 0;
  EXPECT_EQ(search_uniform(spec, c).terminated_by, Termination::kBudget);
}

TEST(Exhaustive, SmallestMixedSpec) {
  const DesignSpec spec(4, 1, 1, {2, 2});
  const ExhaustiveResult r = exhaustive_uniform(spec);
  EXPECT_NEAR(r.optimum, 11.0 / 192.0, 1e-9);
  EXPECT_EQ(r.evaluated, 6u);
  EXPECT_EQ(r.optimal_count, 4u);
  EXPECT_TRUE(is_full_factorial(r.design));
}

TEST(Exhaustive, QualitativePairIsZero) {
  const ExhaustiveResult r = exhaustive_uniform(DesignSpec(2, 1, 0, {2}));
  EXPECT_NEAR(r.optimum, 0.0, 1e-15);
  EXPECT_EQ(r.evaluated, 1u);
}

TEST(Exhaustive, AttainsBalancePatternBound) {
  const ExhaustiveResult r = exhaustive_uniform(DesignSpec(4, 1, 2, {4, 2, 2}));
  EXPECT_NEAR(r.optimum, lb2(4, 1, 2, 4), 1e-12);
}

TEST(Exhaustive, CapIsEnforced) {
  EXPECT_THROW(exhaustive_uniform(DesignSpec(16, 1, 2, {2, 16, 16})), CapacityError);
  EXPECT_THROW(exhaustive_uniform(DesignSpec(4, 1, 2, {4, 2, 2}), {}, 35), CapacityError);
  EXPECT_NO_THROW(exhaustive_uniform(DesignSpec(4, 1, 2, {4, 2, 2}), {}, 36));
}

TEST(Exhaustive, BoundSandwichOnTinySpaces) {
  const std::vector<test::SpecShape> tiny = {
      {4, 1, {2, 2}},    {4, 1, {2, 2, 2}}, {6, 1, {2, 3}},    {6, 1, {3, 2}},  {4, 0, {2, 2}},
      {4, 2, {2, 2}},    {6, 1, {2, 3, 2}}, {4, 1, {4, 2, 2}}, {6, 0, {3, 2}},  {6, 1, {3, 3}},
      {6, 2, {2, 3}},    {4, 1, {2, 4}},    {6, 1, {2, 6}},    {4, 1, {4, 4}},  {6, 1, {6, 2}},
  };
  for (const auto& shape : tiny) {
    const int m = static_cast<int>(shape.levels.size());
    const DesignSpec spec(shape.n, shape.p, m - shape.p, shape.levels);
    const ExhaustiveResult ex = exhaustive_uniform(spec);
    const LowerBound bound = lb(spec);
    EXPECT_GE(ex.optimum, bound.value - 1e-10) << spec.to_string();
    SearchConfig c;
    c.budget = 3'000;
    const SearchResult r = search_uniform(spec, c);
    EXPECT_GE(r.best_value, ex.optimum - 1e-10) << spec.to_string();
    if (static_cast<std::uint64_t>(shape.n) == *spec.combination_count()) {
      EXPECT_NEAR(ex.optimum, full_factorial_qqd(spec), 1e-10) << spec.to_string();
      EXPECT_TRUE(is_full_factorial(ex.design));
    }
  }
}

}  // namespace
}  // namespace qqd
