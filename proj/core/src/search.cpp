#include "qqd/search.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qqd/discrepancy.hpp"
#include "qqd/error.hpp"

namespace qqd {

namespace {

void require_feasible(const DesignSpec& spec) {
  if (!spec.utype_feasible()) {
    throw DomainError("no U-type design exists for " + spec.to_string() +
                      ": every level count must divide the run count");
  }
}

std::vector<double> default_schedule(double initial, double bound) {
  constexpr int kSteps = 20;
  const double start = std::max(0.0, 0.05 * (initial - bound));
  std::vector<double> schedule(kSteps, 0.0);
  const double ratio = std::pow(1e-3, 1.0 / (kSteps - 2));
  double t = start;
  for (int i = 0; i < kSteps - 1; ++i, t *= ratio) schedule[static_cast<std::size_t>(i)] = t;
  return schedule;
}

struct RestartOutcome {
  Design best;
  double best_value;
  double tracked_value;
  std::vector<TracePoint> trace;
  Termination terminated_by;
  std::uint64_t iterations;
};

bool same_entry(const Design& d, int factor, int i, int j) {
  const int p = d.spec().qualitative();
  if (factor < p) return d.qualitative()(i, factor) == d.qualitative()(j, factor);
  return d.quantitative()(i, factor - p) == d.quantitative()(j, factor - p);
}

RestartOutcome run_restart(const DesignSpec& spec, const SearchConfig& config, double bound,
                           int restart) {
  Rng rng(config.seed ^ Rng::mix(static_cast<std::uint64_t>(restart)));
  Design design = random_utype(spec, rng);
  PairCache cache(design, config.criterion);
  double current = cache.value();

  RestartOutcome out{design, current, current, {{0, current}}, Termination::kBudget, 0};
  auto at_bound = [&] { return config.stop_at_bound && out.best_value <= bound + config.bound_tol; };
  if (at_bound()) {
    out.terminated_by = Termination::kBound;
    return out;
  }

  const std::vector<double> schedule = config.threshold_schedule.empty()
                                           ? default_schedule(current, bound)
                                           : config.threshold_schedule;
  const auto steps = static_cast<std::uint64_t>(schedule.size());
  std::vector<std::uint64_t> per_step(schedule.size());
  std::uint64_t planned = 0;
  if (config.iterations_per_threshold == 0) {
    std::fill(per_step.begin(), per_step.end(), config.budget / steps);
    per_step.back() += config.budget % steps;
    planned = config.budget;
  } else {
    for (auto& iters : per_step) {
      iters = std::min(config.iterations_per_threshold, config.budget - planned);
      planned += iters;
    }
  }

  std::vector<int> movable;
  for (int k = 0; k < spec.factors(); ++k) {
    if (spec.levels(k) > 1) movable.push_back(k);
  }
  const auto n = static_cast<std::uint64_t>(spec.runs());

  std::uint64_t iteration = 0;
  if (!movable.empty() && n > 1) {
    for (std::size_t step = 0; step < schedule.size(); ++step) {
      const double threshold = schedule[step];
      for (std::uint64_t t = 0; t < per_step[step]; ++t) {
        ++iteration;
        const int factor = movable[rng.below(movable.size())];
        const auto i = static_cast<int>(rng.below(n));
        auto j = static_cast<int>(rng.below(n - 1));
        if (j >= i) ++j;
        if (same_entry(design, factor, i, j)) continue;
        const auto move = cache.evaluate_swap(design, factor, i, j);
        if (!move.neutral && move.delta > threshold) continue;
        current = cache.apply_swap(design, factor, i, j);
        if (current < out.best_value) {
          out.best = design;
          out.best_value = current;
          out.trace.push_back({iteration, current});
          if (at_bound()) {
            out.terminated_by = Termination::kBound;
            out.iterations = iteration;
            out.tracked_value = current;
            return out;
          }
        }
      }
    }
  } else {
    iteration = planned;
  }
  out.iterations = iteration;
  out.tracked_value = out.best_value;
  out.terminated_by = planned < config.budget ? Termination::kSchedule : Termination::kBudget;
  return out;
}

}  // namespace

Design random_utype(const DesignSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return random_utype(spec, rng);
}

Design random_utype(const DesignSpec& spec, Rng& rng) {
  require_feasible(spec);
  const int n = spec.runs();
  const int p = spec.qualitative();
  Matrix<int> qual(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  Matrix<int> quant(static_cast<std::size_t>(n), static_cast<std::size_t>(spec.quantitative()));
  std::vector<int> column(static_cast<std::size_t>(n));
  for (int k = 0; k < spec.factors(); ++k) {
    const int s = spec.levels(k);
    for (int i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = i / (n / s);
    rng.shuffle(column);
    for (int i = 0; i < n; ++i) {
      if (k < p) {
        qual(i, k) = column[static_cast<std::size_t>(i)];
      } else {
        quant(i, k - p) = column[static_cast<std::size_t>(i)];
      }
    }
  }
  return design_from_levels(spec, qual, quant);
}

void SearchConfig::validate() const {
  if (restarts < 1) throw DomainError("restarts must be positive");
  if (!(bound_tol >= 0.0)) throw DomainError("bound tolerance must be non-negative");
  if (!threshold_schedule.empty()) {
    if (threshold_schedule.back() != 0.0) throw DomainError("threshold schedule must end at 0");
    for (std::size_t i = 0; i < threshold_schedule.size(); ++i) {
      if (threshold_schedule[i] < 0.0 ||
          (i > 0 && threshold_schedule[i] > threshold_schedule[i - 1])) {
        throw DomainError("threshold schedule must be non-negative and non-increasing");
      }
    }
  }
  criterion.validate();
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::kBudget: return "budget";
    case Termination::kBound: return "bound";
    case Termination::kSchedule: return "schedule";
  }
  return "?";
}

SearchResult search_uniform(const DesignSpec& spec, const SearchConfig& config) {
  config.validate();
  require_feasible(spec);
  const LowerBound bound = lb(spec);

  std::vector<RestartOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(config.restarts));
  if (config.parallel && config.restarts > 1) {
    std::vector<std::future<RestartOutcome>> jobs;
    for (int r = 0; r < config.restarts; ++r) {
      jobs.push_back(std::async(std::launch::async, run_restart, std::cref(spec), std::cref(config),
                                bound.value, r));
    }
    for (auto& job : jobs) outcomes.push_back(job.get());
  } else {
    for (int r = 0; r < config.restarts; ++r) {
      outcomes.push_back(run_restart(spec, config, bound.value, r));
    }
  }

  std::size_t winner = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].best_value < outcomes[winner].best_value) winner = r;
  }
  RestartOutcome& best = outcomes[winner];
  const double recomputed = qqd_squared(best.best, config.criterion);
  return SearchResult{std::move(best.best),
                      recomputed,
                      best.tracked_value,
                      bound,
                      recomputed - bound.value,
                      std::move(best.trace),
                      best.terminated_by,
                      static_cast<int>(winner),
                      best.iterations};
}

ExhaustiveResult exhaustive_uniform(const DesignSpec& spec, const CriterionConfig& config,
                                    std::uint64_t cap) {
  namespace mp = boost::multiprecision;
  config.validate();
  require_feasible(spec);
  const int n = spec.runs();
  const int m = spec.factors();
  const int p = spec.qualitative();

  auto factorial = [](int x) {
    mp::cpp_int out = 1;
    for (int i = 2; i <= x; ++i) out *= i;
    return out;
  };
  mp::cpp_int space = 1;
  for (int k = 1; k < m; ++k) {
    const int s = spec.levels(k);
    space *= factorial(n) / mp::pow(factorial(n / s), static_cast<unsigned>(s));
  }
  if (space > cap) {
    throw CapacityError("exhaustive search over " + spec.to_string() + " needs " + space.str() +
                        " evaluations, cap is " + std::to_string(cap));
  }

  // Kernel tables indexed by level pairs.
  std::vector<KernelFactor> kernels;
  for (int k = 0; k < m; ++k) kernels.push_back(kernel_matrix(k, spec, config));
  const double constant = qqd_constant(spec, config);

  std::vector<std::vector<int>> columns(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const int s = spec.levels(k);
    auto& col = columns[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) col.push_back(i / (n / s));
  }

  auto evaluate = [&] {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double term = 1.0;
        for (int k = 0; k < m; ++k) {
          const auto& col = columns[static_cast<std::size_t>(k)];
          term *= kernels[static_cast<std::size_t>(k)].entries(
              static_cast<std::size_t>(col[static_cast<std::size_t>(i)]),
              static_cast<std::size_t>(col[static_cast<std::size_t>(j)]));
        }
        total += term;
      }
    }
    return constant + total / (static_cast<double>(n) * n);
  };

  ExhaustiveResult result{0.0, random_utype(spec, 0), 0, 0};
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> best_columns;
  constexpr double kTie = 1e-12;

  while (true) {
    const double value = evaluate();
    ++result.evaluated;
    if (value < best - kTie) {
      best = value;
      best_columns = columns;
      result.optimal_count = 1;
    } else if (value <= best + kTie) {
      ++result.optimal_count;
    }
    // advance the odometer of column permutations, column 0 held fixed
    int k = m - 1;
    for (; k >= 1; --k) {
      auto& col = columns[static_cast<std::size_t>(k)];
      if (std::next_permutation(col.begin(), col.end())) break;  // wraps to sorted when false
    }
    if (k < 1) break;
  }

  Matrix<int> qual(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
  Matrix<int> quant(static_cast<std::size_t>(n), static_cast<std::size_t>(m - p));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) {
      const int level = best_columns[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      if (k < p) {
        qual(i, k) = level;
      } else {
        quant(i, k - p) = level;
      }
    }
  }
  result.design = design_from_levels(spec, qual, quant);
  result.optimum = qqd_squared(result.design, config);
  return result;
}

}  // namespace qqd
