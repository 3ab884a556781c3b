#include "qqd_cli/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "qqd/bounds.hpp"
#include "qqd/design_io.hpp"
#include "qqd/discrepancy.hpp"
#include "qqd/error.hpp"
#include "qqd/reference_designs.hpp"

namespace qqd::cli {

namespace {

constexpr double kFourDecimals = 5e-5;
constexpr double kLargeValue = 5e-4;

class Table {
 public:
  explicit Table(std::optional<double> tolerance) : override_(tolerance) {}

  void add(std::string id, std::string description, double expected, double computed,
           double tolerance, std::string note = {}) {
    const double tol = override_.value_or(tolerance);
    const bool pass = std::abs(computed - expected) < tol;
    rows_.push_back({std::move(id), std::move(description), expected, computed, tol, pass,
                     std::move(note)});
  }

  std::vector<ReproductionRow> take() { return std::move(rows_); }

 private:
  std::optional<double> override_;
  std::vector<ReproductionRow> rows_;
};

}  // namespace

bool Reproduction::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

Reproduction reproduce_published(std::optional<double> tolerance) {
  namespace ref = qqd::reference;
  Table table(tolerance);
  Reproduction out;

  table.add("mcd8_diagonal", "QQD2, 8-run MCD with equal quantitative columns", 0.0213,
            qqd_squared(ref::mcd8_diagonal()), kFourDecimals);
  table.add("mcd8_staggered", "QQD2, 8-run MCD with staggered columns", 0.0164,
            qqd_squared(ref::mcd8_staggered()), kFourDecimals);

  table.add("mcd16_columns23", "QQD2, 16-run MCD on LHD columns 2,3", 0.0066,
            qqd_squared(ref::mcd16_columns23()), kFourDecimals);
  table.add("mcd16_columns24", "QQD2, 16-run MCD on LHD columns 2,4", 0.0063,
            qqd_squared(ref::mcd16_columns24()), kFourDecimals);
  table.add("mcd16_columns34", "QQD2, 16-run MCD on LHD columns 3,4", 0.0060,
            qqd_squared(ref::mcd16_columns34()), kFourDecimals);

  const Design ordered = ref::juxtaposed16_ordered();
  const Design permuted = ref::juxtaposed16_permuted();
  const Design aliased = ref::juxtaposed16_aliased();
  table.add("juxtaposed16_ordered", "QQD2, juxtaposed factorials in row order", 0.0822,
            qqd_squared(ordered), kFourDecimals);
  table.add("juxtaposed16_permuted", "QQD2, juxtaposed factorials row-permuted", 0.0545,
            qqd_squared(permuted), kFourDecimals);
  table.add("juxtaposed16_aliased", "QQD2, identical qualitative columns", 0.0813,
            qqd_squared(aliased), kFourDecimals);

  // Slice criterion: try both aggregation modes and report the one that
  // reproduces both published values.
  const double swd_tol = tolerance.value_or(kFourDecimals);
  const double expected_permuted = 1.1055;
  const double expected_aliased = 1.0999;
  const SwdLattice lattice = SwdLattice::kEndpoint;
  std::vector<SwdMode> matched;
  for (SwdMode mode : {SwdMode::kWd, SwdMode::kWdSquared}) {
    if (std::abs(swd(permuted, mode, lattice) - expected_permuted) < swd_tol &&
        std::abs(swd(aliased, mode, lattice) - expected_aliased) < swd_tol) {
      matched.push_back(mode);
    }
  }
  out.swd.lattice = to_string(lattice);
  out.swd.mode = matched.size() == 1 ? to_string(matched.front())
                                     : (matched.empty() ? "none" : "ambiguous");
  const SwdMode used = matched.size() == 1 ? matched.front() : SwdMode::kWd;
  const std::string note = "mode=" + out.swd.mode + " lattice=" + out.swd.lattice;
  table.add("swd_permuted", "SWD, juxtaposed factorials row-permuted", expected_permuted,
            swd(permuted, used, lattice), kFourDecimals, note);
  table.add("swd_aliased", "SWD, identical qualitative columns", expected_aliased,
            swd(aliased, used, lattice), kFourDecimals, note);

  table.add("lb2_n4", "balance-pattern bound, U(4, 4 x 2^2)", 0.1706, lb2(4, 1, 2, 4),
            kFourDecimals);
  table.add("lb2_attaining4", "QQD2 of the 4-run design on that bound", 0.1706,
            qqd_squared(ref::lb2_attaining4()), kFourDecimals);

  const Design eight = ref::lb1_attaining8();
  table.add("lb1_n8", "geometric-mean bound, U(8, 2^7 x 4^7)", 17.0235, lb1(eight.spec()),
            kLargeValue);
  table.add("lb1_attaining8", "QQD2 of the 8-run design on that bound", 17.0235,
            qqd_squared(eight), kLargeValue);

  const double factorial_parts[4] = {0.2255, 0.2255, 0.1766, 0.1571};
  const double full_designs[4] = {0.0763, 0.0795, 0.0792, 0.0653};
  for (int v = 1; v <= 4; ++v) {
    table.add("ccd_factorial" + std::to_string(v),
              "QQD2, CCD factorial runs, assignment " + std::to_string(v),
              factorial_parts[v - 1], qqd_squared(ref::ccd_factorial_part(v)), kFourDecimals);
  }
  for (int v = 1; v <= 4; ++v) {
    table.add("ccd_full" + std::to_string(v), "QQD2, full CCD, assignment " + std::to_string(v),
              full_designs[v - 1], qqd_squared(ref::ccd_full(v)), kFourDecimals);
  }

  out.rows = table.take();
  return out;
}

std::vector<std::filesystem::path> write_fixtures(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& named : qqd::reference::all()) {
    const auto path = dir / (named.name + ".txt");
    std::ofstream file(path);
    if (!file) throw Error("cannot write " + path.string());
    file << "# " << named.description << '\n';
    write_design_text(file, named.design);
    if (!file) throw Error("cannot write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace qqd::cli
