#include "qqd_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qqd/balance.hpp"
#include "qqd/bounds.hpp"
#include "qqd/design_io.hpp"
#include "qqd/discrepancy.hpp"
#include "qqd/error.hpp"
#include "qqd/search.hpp"
#include "qqd_cli/reproduce.hpp"

namespace qqd::cli {

namespace {

using nlohmann::json;

struct Globals {
  bool json = false;
  std::optional<double> tol;
};

struct KernelFlags {
  double a = CriterionConfig{}.a;
  double b = CriterionConfig{}.b;

  void attach(CLI::App* cmd) {
    cmd->add_option("--a", a, "qualitative kernel value for equal levels")->capture_default_str();
    cmd->add_option("--b", b, "qualitative kernel value for different levels")
        ->capture_default_str();
  }

  CriterionConfig config() const {
    CriterionConfig c;
    c.a = a;
    c.b = b;
    c.validate();
    return c;
  }
};

struct SpecFlags {
  int n = 0;
  int p = 0;
  int q = 0;
  std::string levels;

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "run count")->required();
    cmd->add_option("--p", p, "qualitative factor count")->required();
    cmd->add_option("--q", q, "quantitative factor count")->required();
    cmd->add_option("--levels", levels, "level counts, e.g. 4,2,2 or 2x7,4x7")->required();
  }

  DesignSpec spec() const { return DesignSpec(n, p, q, parse_levels(levels)); }
};

json spec_json(const DesignSpec& spec) {
  return {{"n", spec.runs()}, {"p", spec.qualitative()}, {"q", spec.quantitative()},
          {"levels", spec.levels()}};
}

json bound_json(const LowerBound& bound) {
  json j = {{"value", bound.value}, {"source", to_string(bound.source)}, {"lb1", bound.lb1}};
  if (bound.lb2) {
    j["lb2"] = *bound.lb2;
  } else {
    j["lb2"] = nullptr;
    j["lb2_note"] = bound.lb2_note;
  }
  return j;
}

void require_feasible(const DesignSpec& spec) {
  if (!spec.utype_feasible()) {
    throw DomainError("no U-type design exists for " + spec.to_string() +
                      ": every level count must divide n");
  }
}

std::string scientific(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", value);
  return buf;
}

// --- eval -------------------------------------------------------------------

struct EvalFlags {
  std::string file;
  std::string criterion = "qqd";
  std::string swd_mode = "wd";
  std::string swd_lattice = "stored";
  KernelFlags kernel;
};

int cmd_eval(const EvalFlags& f, const Globals& g, std::ostream& out) {
  const Design design = load_design(f.file);
  const CriterionConfig config = f.kernel.config();
  const bool all = f.criterion == "all";
  json report = {{"file", f.file}, {"spec", spec_json(design.spec())}};
  std::ostringstream text;
  text << "design " << design.spec().to_string() << '\n';

  if (all || f.criterion == "qqd") {
    const double value = qqd_squared(design, config);
    report["qqd2"] = value;
    text << "QQD2 = " << fixed(value) << '\n';
    const auto count = design.spec().combination_count();
    if (!is_lattice(design)) {
      report["quadratic_form"] = nullptr;
      text << "quadratic form: skipped, design is not lattice-valued\n";
    } else if (!count || *count > kQuadraticFormCap) {
      report["quadratic_form"] = nullptr;
      text << "quadratic form: skipped, N exceeds " << kQuadraticFormCap << '\n';
    } else {
      const double quad = qqd_squared_quadratic(design, config);
      report["quadratic_form"] = quad;
      report["quadratic_form_diff"] = std::abs(quad - value);
      text << "quadratic form = " << fixed(quad) << " (|diff| " << scientific(std::abs(quad - value))
           << ")\n";
    }
  }
  if (all || f.criterion == "wd") {
    if (design.spec().quantitative() > 0) {
      const double value = wd_squared(design);
      report["wd2"] = value;
      text << "WD2 = " << fixed(value) << '\n';
    } else if (!all) {
      throw DomainError("WD needs at least one quantitative factor");
    }
  }
  if (all || f.criterion == "dd") {
    if (design.spec().qualitative() > 0) {
      const double value = dd(design, config);
      report["dd"] = value;
      text << "DD = " << fixed(value) << '\n';
    } else if (!all) {
      throw DomainError("DD needs at least one qualitative factor");
    }
  }
  if (all || f.criterion == "swd") {
    const SwdMode mode = f.swd_mode == "wd2" ? SwdMode::kWdSquared : SwdMode::kWd;
    const SwdLattice lattice =
        f.swd_lattice == "endpoint" ? SwdLattice::kEndpoint : SwdLattice::kStored;
    const double value = swd(design, mode, lattice);
    report["swd"] = {{"value", value}, {"mode", to_string(mode)}, {"lattice", to_string(lattice)}};
    text << "SWD[" << to_string(mode) << ", " << to_string(lattice) << "] = " << fixed(value)
         << '\n';
  }

  if (g.json) {
    out << report.dump(2) << '\n';
  } else {
    out << text.str();
  }
  return kExitOk;
}

// --- bounds -----------------------------------------------------------------

int cmd_bounds(const SpecFlags& f, const Globals& g, std::ostream& out) {
  const DesignSpec spec = f.spec();
  require_feasible(spec);
  const LowerBound bound = lb(spec);
  json report = {{"spec", spec_json(spec)}, {"bound", bound_json(bound)}};

  std::optional<double> factorial;
  const auto count = spec.combination_count();
  if (count && static_cast<std::uint64_t>(spec.runs()) % *count == 0) {
    factorial = full_factorial_qqd(spec);
  }
  report["full_factorial_qqd2"] = factorial ? json(*factorial) : json(nullptr);

  if (g.json) {
    out << report.dump(2) << '\n';
    return kExitOk;
  }
  out << "spec " << spec.to_string() << '\n';
  out << "LB1 = " << fixed(bound.lb1) << '\n';
  if (bound.lb2) {
    out << "LB2 = " << fixed(*bound.lb2) << '\n';
  } else {
    out << "LB2 = n/a (" << bound.lb2_note << ")\n";
  }
  out << "LB  = " << fixed(bound.value) << " [" << to_string(bound.source) << "]\n";
  if (factorial) out << "full factorial QQD2 = " << fixed(*factorial) << '\n';
  return kExitOk;
}

// --- balance ----------------------------------------------------------------

int cmd_balance(const std::string& file, bool components, const Globals& g, std::ostream& out) {
  const Design design = load_design(file);
  const BalancePattern pattern = balance_pattern(design);
  std::optional<double> from_balance;
  if (design.spec().quantitative() == 0 ||
      std::all_of(design.spec().levels().begin() + design.spec().qualitative(),
                  design.spec().levels().end(), [](int s) { return s == 2; })) {
    from_balance = qqd_from_balance(design);
  }

  if (g.json) {
    json report = {{"file", file}, {"spec", spec_json(design.spec())},
                   {"aggregate", pattern.aggregate}};
    if (components) {
      json list = json::array();
      for (const auto& [cols, value] : pattern.components) {
        list.push_back({{"columns", cols}, {"value", value}});
      }
      report["components"] = list;
    }
    report["qqd2_from_balance"] = from_balance ? json(*from_balance) : json(nullptr);
    out << report.dump(2) << '\n';
    return kExitOk;
  }
  out << "design " << design.spec().to_string() << '\n';
  for (std::size_t k = 0; k < pattern.aggregate.size(); ++k) {
    out << "B" << k + 1 << " = " << fixed(pattern.aggregate[k]) << '\n';
  }
  if (components) {
    for (const auto& [cols, value] : pattern.components) {
      out << "  {";
      for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i] + 1;
      out << "} " << fixed(value) << '\n';
    }
  }
  if (from_balance) out << "QQD2 from balance pattern = " << fixed(*from_balance) << '\n';
  return kExitOk;
}

// --- compare ----------------------------------------------------------------

int cmd_compare(const std::vector<std::string>& files, const KernelFlags& kernel, const Globals& g,
                std::ostream& out) {
  const CriterionConfig config = kernel.config();
  std::vector<Design> designs;
  for (const auto& file : files) designs.push_back(load_design(file));
  const DesignSpec& spec = designs.front().spec();
  for (std::size_t i = 1; i < designs.size(); ++i) {
    if (!(designs[i].spec() == spec)) {
      throw DomainError("spec mismatch: " + files[i] + " is " + designs[i].spec().to_string() +
                        ", " + files.front() + " is " + spec.to_string());
    }
  }
  std::optional<LowerBound> bound;
  if (spec.utype_feasible()) bound = lb(spec);

  struct Entry {
    std::size_t input;
    double value;
    int rank;
    bool tie;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < designs.size(); ++i) {
    entries.push_back({i, qqd_squared(designs[i], config), 0, false});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& x, const Entry& y) { return x.value < y.value; });
  const double tie_tol = g.tol.value_or(config.tol_equiv);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].value - entries[i - 1].value <= tie_tol) {
      entries[i].rank = entries[i - 1].rank;
      entries[i].tie = entries[i - 1].tie = true;
    } else {
      entries[i].rank = static_cast<int>(i) + 1;
    }
  }

  if (g.json) {
    json report = {{"spec", spec_json(spec)},
                   {"bound", bound ? bound_json(*bound) : json(nullptr)},
                   {"tie_tolerance", tie_tol}};
    json ranking = json::array();
    for (const auto& e : entries) {
      ranking.push_back({{"rank", e.rank},
                         {"file", files[e.input]},
                         {"qqd2", e.value},
                         {"gap", bound ? json(e.value - bound->value) : json(nullptr)},
                         {"tie", e.tie}});
    }
    report["ranking"] = ranking;
    out << report.dump(2) << '\n';
    return kExitOk;
  }
  out << "spec " << spec.to_string();
  if (bound) out << ", LB = " << fixed(bound->value) << " [" << to_string(bound->source) << "]";
  out << '\n';
  out << std::left << std::setw(6) << "rank" << std::setw(12) << "QQD2" << std::setw(12) << "gap"
      << "file\n";
  for (const auto& e : entries) {
    out << std::left << std::setw(6) << e.rank << std::setw(12) << fixed(e.value) << std::setw(12)
        << (bound ? fixed(e.value - bound->value) : std::string("n/a")) << files[e.input]
        << (e.tie ? "  (tie)" : "") << '\n';
  }
  return kExitOk;
}

// --- search -----------------------------------------------------------------

struct SearchFlags {
  SpecFlags spec;
  KernelFlags kernel;
  std::uint64_t budget = SearchConfig{}.budget;
  int restarts = 1;
  std::uint64_t seed = 1;
  std::uint64_t per_threshold = 0;
  bool keep_going = false;
  bool sequential = false;
  std::string out;
  std::string result;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_search(const SearchFlags& f, const Globals& g, std::ostream& out) {
  const DesignSpec spec = f.spec.spec();
  require_feasible(spec);
  SearchConfig config;
  config.budget = f.budget;
  config.restarts = f.restarts;
  config.seed = f.seed;
  config.iterations_per_threshold = f.per_threshold;
  config.stop_at_bound = !f.keep_going;
  config.parallel = !f.sequential;
  config.criterion = f.kernel.config();
  const SearchResult r = search_uniform(spec, config);
  const bool attained = r.gap <= config.bound_tol;

  json trace = json::array();
  for (const auto& t : r.trace) trace.push_back({t.iteration, t.value});
  json report = {{"spec", spec_json(spec)},
                 {"seed", f.seed},
                 {"budget", f.budget},
                 {"restarts", f.restarts},
                 {"best_value", r.best_value},
                 {"tracked_value", r.tracked_value},
                 {"bound", bound_json(r.bound)},
                 {"gap", r.gap},
                 {"bound_attained", attained},
                 {"terminated_by", to_string(r.terminated_by)},
                 {"iterations", r.iterations},
                 {"best_restart", r.best_restart},
                 {"trace", trace},
                 {"design", design_to_json(r.best_design)}};

  if (!f.out.empty()) save_design(f.out, r.best_design, ends_with(f.out, ".json"));
  if (!f.result.empty()) {
    std::ofstream file(f.result);
    if (!file) throw Error("cannot write " + f.result);
    file << report.dump(2) << '\n';
  }

  if (g.json) {
    out << report.dump(2) << '\n';
  } else {
    out << "spec " << spec.to_string() << '\n';
    out << "best QQD2 = " << fixed(r.best_value) << '\n';
    out << "LB = " << fixed(r.bound.value) << " [" << to_string(r.bound.source) << "]\n";
    out << "gap = " << fixed(r.gap) << '\n';
    out << "stopped by " << to_string(r.terminated_by) << " after " << r.iterations
        << " iterations (restart " << r.best_restart << ")\n";
    if (f.out.empty()) write_design_text(out, r.best_design);
  }
  return attained ? kExitOk : kExitBoundNotReached;
}

// --- reproduce --------------------------------------------------------------

int cmd_reproduce(const std::string& fixtures_dir, const Globals& g, std::ostream& out) {
  if (!fixtures_dir.empty()) {
    const auto written = write_fixtures(fixtures_dir);
    if (!g.json) out << "wrote " << written.size() << " fixtures to " << fixtures_dir << '\n';
  }
  const Reproduction rep = reproduce_published(g.tol);
  std::size_t passed = 0;
  for (const auto& row : rep.rows) passed += row.pass ? 1 : 0;

  if (g.json) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({{"id", row.id},
                      {"description", row.description},
                      {"expected", row.expected},
                      {"computed", row.computed},
                      {"abs_diff", std::abs(row.computed - row.expected)},
                      {"tolerance", row.tolerance},
                      {"pass", row.pass},
                      {"note", row.note}});
    }
    out << json{{"rows", rows},
                {"swd", {{"mode", rep.swd.mode}, {"lattice", rep.swd.lattice}}},
                {"passed", passed},
                {"total", rep.rows.size()}}
               .dump(2)
        << '\n';
  } else {
    out << std::left << std::setw(24) << "id" << std::setw(10) << "expected" << std::setw(12)
        << "computed" << std::setw(10) << "|diff|" << std::setw(10) << "tol" << "result\n";
    for (const auto& row : rep.rows) {
      out << std::left << std::setw(24) << row.id << std::setw(10) << fixed(row.expected, 4)
          << std::setw(12) << fixed(row.computed) << std::setw(10)
          << scientific(std::abs(row.computed - row.expected)) << std::setw(10)
          << scientific(row.tolerance) << (row.pass ? "pass" : "FAIL");
      if (!row.note.empty()) out << "  " << row.note;
      out << '\n';
    }
    out << "SWD matched mode " << rep.swd.mode << " on the " << rep.swd.lattice << " lattice\n";
    out << passed << "/" << rep.rows.size() << " values reproduced\n";
  }
  return rep.all_pass() ? kExitOk : kExitReproduction;
}

}  // namespace

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> levels;
  std::stringstream items(text);
  std::string item;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ParseError("bad level list '" + text + "'", 0);
    return v;
  };
  while (std::getline(items, item, ',')) {
    const auto mark = item.find_first_of("x^");
    if (mark == std::string::npos) {
      levels.push_back(to_int(item));
      continue;
    }
    const int s = to_int(item.substr(0, mark));
    const int times = to_int(item.substr(mark + 1));
    if (times < 1) throw ParseError("bad repeat count in '" + text + "'", 0);
    levels.insert(levels.end(), static_cast<std::size_t>(times), s);
  }
  if (levels.empty()) throw ParseError("empty level list", 0);
  return levels;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrepancy criteria, lower bounds and search for designs with qualitative and "
               "quantitative factors",
               "qqd"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  double tol = 0.0;
  app.add_flag("--json", g.json, "machine-readable output");
  auto* tol_opt = app.add_option("--tol", tol, "absolute tolerance for comparisons")
                      ->check(CLI::PositiveNumber);

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate criteria on a design file");
  eval_cmd->add_option("file", eval.file, "design file (text or JSON)")->required();
  eval_cmd->add_option("--criterion", eval.criterion)
      ->check(CLI::IsMember({"qqd", "wd", "dd", "swd", "all"}))
      ->capture_default_str();
  eval_cmd->add_option("--swd-mode", eval.swd_mode, "sum WD or WD2 over slices")
      ->check(CLI::IsMember({"wd", "wd2"}))
      ->capture_default_str();
  eval_cmd->add_option("--swd-lattice", eval.swd_lattice,
                       "evaluate slices on stored values or on levels mapped to l/(s-1)")
      ->check(CLI::IsMember({"stored", "endpoint"}))
      ->capture_default_str();
  eval.kernel.attach(eval_cmd);

  SpecFlags bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "lower bounds for a design spec");
  bounds.attach(bounds_cmd);

  std::string balance_file;
  bool balance_components = false;
  auto* balance_cmd = app.add_subcommand("balance", "balance pattern of a design file");
  balance_cmd->add_option("file", balance_file)->required();
  balance_cmd->add_flag("--components", balance_components, "list every column subset");

  std::vector<std::string> compare_files;
  KernelFlags compare_kernel;
  auto* compare_cmd = app.add_subcommand("compare", "rank design files by QQD2");
  compare_cmd->add_option("files", compare_files)->required();
  compare_kernel.attach(compare_cmd);

  SearchFlags search;
  auto* search_cmd = app.add_subcommand("search", "threshold-accepting search for a U-type design");
  search.spec.attach(search_cmd);
  search.kernel.attach(search_cmd);
  search_cmd->add_option("--budget", search.budget, "iterations per restart")->capture_default_str();
  search_cmd->add_option("--restarts", search.restarts)->capture_default_str();
  search_cmd->add_option("--seed", search.seed)->capture_default_str();
  search_cmd->add_option("--iters-per-threshold", search.per_threshold,
                         "0 spreads the budget evenly over the schedule");
  search_cmd->add_flag("--keep-going", search.keep_going, "do not stop at the lower bound");
  search_cmd->add_flag("--sequential", search.sequential, "run restarts on one thread");
  search_cmd->add_option("--out", search.out, "write the best design (.json for JSON)");
  search_cmd->add_option("--result", search.result, "write the JSON result");

  std::string fixtures_dir;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "recompute the published values");
  reproduce_cmd->add_option("--write-fixtures", fixtures_dir,
                            "also write the bundled designs to this directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (tol_opt->count() > 0) g.tol = tol;

  try {
    if (*eval_cmd) return cmd_eval(eval, g, out);
    if (*bounds_cmd) return cmd_bounds(bounds, g, out);
    if (*balance_cmd) return cmd_balance(balance_file, balance_components, g, out);
    if (*compare_cmd) return cmd_compare(compare_files, compare_kernel, g, out);
    if (*search_cmd) return cmd_search(search, g, out);
    if (*reproduce_cmd) return cmd_reproduce(fixtures_dir, g, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const StructureError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace qqd::cli
