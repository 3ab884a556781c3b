#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qqd::cli {

struct ReproductionRow {
  std::string id;
  std::string description;
  double expected;
  double computed;
  double tolerance;
  bool pass;
  std::string note;
};

struct SwdMatch {
  std::string mode;      // "wd", "wd2", or "none" / "ambiguous"
  std::string lattice;   // lattice the values were evaluated on
};

struct Reproduction {
  std::vector<ReproductionRow> rows;
  SwdMatch swd;
  bool all_pass() const;
};

/// Recomputes every published value from the bundled designs. `tolerance`
/// replaces the per-row tolerances when set.
Reproduction reproduce_published(std::optional<double> tolerance = std::nullopt);

/// Writes every bundled design to `dir` as `<name>.txt`; returns the paths.
std::vector<std::filesystem::path> write_fixtures(const std::filesystem::path& dir);

}  // namespace qqd::cli
