#include "qqd/reference_designs.hpp"

#include <cmath>
#include <stdexcept>

#include "qqd/error.hpp"

namespace qqd::reference {

namespace {

Matrix<int> columns_to_matrix(const std::vector<std::vector<int>>& columns) {
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  Matrix<int> out(n, columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) out(i, k) = columns[k][i];
  }
  return out;
}

Matrix<int> rows_to_matrix(const std::vector<std::vector<int>>& rows) {
  Matrix<int> out(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) out(i, k) = rows[i][k];
  }
  return out;
}

Design from_columns(std::vector<int> levels, const std::vector<std::vector<int>>& qual,
                    const std::vector<std::vector<int>>& quant) {
  const int n = static_cast<int>(qual.empty() ? quant.front().size() : qual.front().size());
  const DesignSpec spec(n, static_cast<int>(qual.size()), static_cast<int>(quant.size()),
                        std::move(levels));
  return design_from_levels(spec, columns_to_matrix(qual), columns_to_matrix(quant));
}

const std::vector<int> kMcd8Qual = {0, 0, 0, 0, 1, 1, 1, 1};
const std::vector<int> kMcd8First = {0, 2, 4, 6, 1, 3, 5, 7};

const std::vector<int> kMcd16Qual = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
const std::vector<int> kMcd16Col2 = {0, 1, 15, 14, 8, 9, 6, 7, 11, 10, 5, 4, 2, 3, 13, 12};
const std::vector<int> kMcd16Col3 = {1, 0, 14, 15, 3, 2, 12, 13, 6, 7, 9, 8, 5, 4, 10, 11};
const std::vector<int> kMcd16Col4 = {0, 14, 15, 1, 10, 5, 4, 11, 12, 3, 2, 13, 6, 9, 8, 7};

const std::vector<std::vector<int>> kJuxtaposedQual = {
    {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1},
    {0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0}};
const std::vector<std::vector<int>> kJuxtaposedOrdered = {
    {0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3},
    {0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3}};
const std::vector<std::vector<int>> kJuxtaposedPermuted = {
    {0, 0, 1, 1, 2, 2, 3, 3, 0, 0, 1, 1, 2, 2, 3, 3},
    {0, 2, 1, 3, 0, 2, 1, 3, 1, 3, 0, 2, 1, 3, 0, 2}};

// CCD runs (x1, x2) in coded units; 0 = centre, +-1 factorial, +-2 axial.
struct CcdRun {
  int x1;
  int x2;
};
const CcdRun kCcd[10] = {{1, 1},  {1, -1}, {-1, 1}, {-1, -1}, {0, 0},
                         {0, 0},  {2, 0},  {-2, 0}, {0, 2},   {0, -2}};
// Qualitative assignments, -1 -> level 0, +1 -> level 1.
const int kCcdZ[4][10] = {{-1, -1, -1, 1, 1, -1, 1, -1, 1, -1},
                          {-1, 1, 1, 1, 1, -1, -1, -1, -1, -1},
                          {-1, -1, 1, 1, 1, -1, -1, -1, -1, 1},
                          {-1, 1, 1, -1, 1, -1, 1, -1, -1, 1}};

double ccd_coordinate(int coded) {
  const double root2 = std::sqrt(2.0);
  const double x = std::abs(coded) == 2 ? (coded > 0 ? root2 : -root2) : coded;
  return (x + root2) / (2.0 * root2);
}

void check_variant(int variant) {
  if (variant < 1 || variant > 4) throw DomainError("CCD variant must be 1..4");
}

}  // namespace

Design mcd8_diagonal() { return from_columns({2, 8, 8}, {kMcd8Qual}, {kMcd8First, kMcd8First}); }

Design mcd8_staggered() {
  return from_columns({2, 8, 8}, {kMcd8Qual}, {kMcd8First, {2, 0, 6, 4, 5, 3, 1, 7}});
}

Design mcd8_staggered_as_printed() {
  return from_columns({2, 8, 8}, {kMcd8Qual}, {kMcd8First, {2, 0, 6, 4, 5, 3, 7, 1}});
}

Design mcd16_columns23() { return from_columns({2, 16, 16}, {kMcd16Qual}, {kMcd16Col2, kMcd16Col3}); }
Design mcd16_columns24() { return from_columns({2, 16, 16}, {kMcd16Qual}, {kMcd16Col2, kMcd16Col4}); }
Design mcd16_columns34() { return from_columns({2, 16, 16}, {kMcd16Qual}, {kMcd16Col3, kMcd16Col4}); }

Design juxtaposed16_ordered() {
  return from_columns({2, 2, 4, 4}, kJuxtaposedQual, kJuxtaposedOrdered);
}

Design juxtaposed16_permuted() {
  return from_columns({2, 2, 4, 4}, kJuxtaposedQual, kJuxtaposedPermuted);
}

Design juxtaposed16_aliased() {
  const std::vector<int> halves = {0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1};
  return from_columns({2, 2, 4, 4}, {halves, halves}, kJuxtaposedPermuted);
}

Design lb2_attaining4() {
  return from_columns({4, 2, 2}, {{0, 1, 2, 3}}, {{0, 1, 0, 1}, {1, 0, 0, 1}});
}

Design lb1_attaining8() {
  const DesignSpec spec(8, 7, 7, {2, 2, 2, 2, 2, 2, 2, 4, 4, 4, 4, 4, 4, 4});
  const Matrix<int> qual = rows_to_matrix({{0, 0, 0, 0, 1, 0, 0},
                                           {0, 0, 0, 1, 0, 1, 1},
                                           {0, 1, 1, 1, 0, 0, 0},
                                           {1, 1, 0, 1, 1, 0, 1},
                                           {0, 1, 1, 0, 1, 1, 1},
                                           {1, 0, 1, 1, 1, 1, 0},
                                           {1, 0, 1, 0, 0, 0, 1},
                                           {1, 1, 0, 0, 0, 1, 0}});
  const Matrix<int> quant = rows_to_matrix({{1, 1, 2, 3, 1, 2, 3},
                                            {3, 2, 0, 0, 1, 1, 2},
                                            {3, 3, 1, 2, 2, 3, 3},
                                            {2, 2, 2, 2, 0, 0, 1},
                                            {2, 3, 3, 0, 3, 2, 0},
                                            {1, 0, 3, 1, 2, 0, 2},
                                            {0, 1, 0, 1, 0, 3, 0},
                                            {0, 0, 1, 3, 3, 1, 1}});
  return design_from_levels(spec, qual, quant);
}

Design ccd_factorial_part(int variant) {
  check_variant(variant);
  const DesignSpec spec(4, 1, 2, {2, 2, 2});
  Matrix<int> qual(4, 1);
  Matrix<int> quant(4, 2);
  for (int i = 0; i < 4; ++i) {
    qual(i, 0) = kCcdZ[variant - 1][i] > 0 ? 1 : 0;
    quant(i, 0) = kCcd[i].x1 > 0 ? 1 : 0;
    quant(i, 1) = kCcd[i].x2 > 0 ? 1 : 0;
  }
  return design_from_levels(spec, qual, quant);
}

Design ccd_full(int variant) {
  check_variant(variant);
  // five distinct settings per quantitative factor; the counts only label the
  // factors since the values are not on a midpoint lattice
  const DesignSpec spec(10, 1, 2, {2, 5, 5});
  Matrix<int> qual(10, 1);
  Matrix<double> quant(10, 2);
  for (int i = 0; i < 10; ++i) {
    qual(i, 0) = kCcdZ[variant - 1][i] > 0 ? 1 : 0;
    quant(i, 0) = ccd_coordinate(kCcd[i].x1);
    quant(i, 1) = ccd_coordinate(kCcd[i].x2);
  }
  return design_from_raw(spec, qual, quant);
}

std::vector<NamedDesign> all() {
  std::vector<NamedDesign> out = {
      {"mcd8_diagonal", "8-run MCD, quantitative columns on the diagonal", mcd8_diagonal()},
      {"mcd8_staggered", "8-run MCD, staggered second column", mcd8_staggered()},
      {"mcd16_columns23", "16-run MCD, LHD columns 2 and 3", mcd16_columns23()},
      {"mcd16_columns24", "16-run MCD, LHD columns 2 and 4", mcd16_columns24()},
      {"mcd16_columns34", "16-run MCD, LHD columns 3 and 4", mcd16_columns34()},
      {"juxtaposed16_ordered", "2^2 and 4^2 full factorials juxtaposed", juxtaposed16_ordered()},
      {"juxtaposed16_permuted", "2^2 with row-permuted 4^2 factorial", juxtaposed16_permuted()},
      {"juxtaposed16_aliased", "identical qualitative columns, permuted 4^2 factorial",
       juxtaposed16_aliased()},
      {"lb2_attaining4", "U(4, 4 x 2^2) on the balance-pattern bound", lb2_attaining4()},
      {"lb1_attaining8", "U(8, 2^7 x 4^7) on the geometric-mean bound", lb1_attaining8()},
  };
  for (int v = 1; v <= 4; ++v) {
    out.push_back({"ccd_factorial" + std::to_string(v),
                   "CCD factorial runs, qualitative assignment " + std::to_string(v),
                   ccd_factorial_part(v)});
  }
  for (int v = 1; v <= 4; ++v) {
    out.push_back({"ccd_full" + std::to_string(v),
                   "full CCD, qualitative assignment " + std::to_string(v), ccd_full(v)});
  }
  return out;
}

}  // namespace qqd::reference
