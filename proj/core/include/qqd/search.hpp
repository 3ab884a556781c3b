#pragma once

#include <cstdint>
#include <vector>

#include "qqd/bounds.hpp"
#include "qqd/design.hpp"
#include "qqd/random.hpp"

namespace qqd {

/// Uniformly random U-type design: every column is an independent shuffle of
/// its balanced level multiset.
Design random_utype(const DesignSpec& spec, std::uint64_t seed);
Design random_utype(const DesignSpec& spec, Rng& rng);

struct SearchConfig {
  std::uint64_t budget = 10'000;  // iterations per restart
  int restarts = 1;
  /// Acceptance thresholds, non-increasing and ending at 0. Empty selects the
  /// default: 20 geometric steps from 0.05 * (initial - bound) down to 0.
  std::vector<double> threshold_schedule;
  /// Iterations spent at each threshold; 0 spreads the budget evenly.
  std::uint64_t iterations_per_threshold = 0;
  std::uint64_t seed = 1;
  bool stop_at_bound = true;
  double bound_tol = 1e-9;
  bool parallel = true;
  CriterionConfig criterion;

  void validate() const;
};

enum class Termination { kBudget, kBound, kSchedule };

const char* to_string(Termination t) noexcept;

struct TracePoint {
  std::uint64_t iteration;
  double value;
};

struct SearchResult {
  Design best_design;
  double best_value;          // full recompute of best_design
  double tracked_value;       // value carried by the incremental updates
  LowerBound bound;
  double gap;                 // best_value - bound.value
  std::vector<TracePoint> trace;  // strictly decreasing best values of the winning restart
  Termination terminated_by;
  int best_restart;
  std::uint64_t iterations;   // iterations used by the winning restart
};

/// Threshold-accepting search over U-type designs. A move swaps two entries of
/// one column; it is accepted when it leaves the value unchanged or raises it
/// by at most the current threshold. Restarts are independent and merge by
/// lowest value, ties going to the lowest restart index.
SearchResult search_uniform(const DesignSpec& spec, const SearchConfig& config = {});

struct ExhaustiveResult {
  double optimum;
  Design design;
  /// Optimal designs among those with the first column sorted ascending
  /// (every U-type design is a row permutation of exactly such designs).
  std::uint64_t optimal_count;
  std::uint64_t evaluated;
};

inline constexpr std::uint64_t kExhaustiveCap = 10'000'000;

/// Exact minimum of the squared QQD over all U-type designs of the spec.
/// The first column is fixed in sorted order, which loses no optimum because
/// the criterion is invariant under row permutations.
ExhaustiveResult exhaustive_uniform(const DesignSpec& spec, const CriterionConfig& config = {},
                                    std::uint64_t cap = kExhaustiveCap);

}  // namespace qqd
