#pragma once

#include <string>
#include <vector>

#include "qqd/design.hpp"

namespace qqd::reference {

// Published designs bundled as fixtures. Qualitative factors come first in
// every design.

struct NamedDesign {
  std::string name;
  std::string description;
  Design design;
};

// 8-run MCDs, one 2-level qualitative and two 8-level quantitative factors.
Design mcd8_diagonal();    // both quantitative columns equal
Design mcd8_staggered();   // second column (2,0,6,4,5,3,1,7)
Design mcd8_staggered_as_printed();  // listing order (2,0,6,4,5,3,7,1)

// 16-run MCDs: a 2-level qualitative column with two of three 16-level LHD
// columns (pairs (2,3), (2,4), (3,4) of the source MCD).
Design mcd16_columns23();
Design mcd16_columns24();
Design mcd16_columns34();

// U(16, 2^2 4^2): two full-factorial 2-level columns juxtaposed with a 4^2
// full factorial in row order, the same factorial row-permuted, and the
// permuted factorial with two identical qualitative columns.
Design juxtaposed16_ordered();
Design juxtaposed16_permuted();
Design juxtaposed16_aliased();

// U(4, 4 x 2^2) attaining the balance-pattern bound.
Design lb2_attaining4();

// U(8, 2^7 x 4^7) attaining the geometric-mean bound.
Design lb1_attaining8();

// Central composite design in two quantitative factors (four factorial,
// two centre, four axial runs) with four different 2-level qualitative
// assignments. `variant` is 1..4.
Design ccd_factorial_part(int variant);  // first four runs, +-1 mapped to 3/4, 1/4
Design ccd_full(int variant);            // all ten runs, x mapped by (x + sqrt2) / (2 sqrt2)

std::vector<NamedDesign> all();

}  // namespace qqd::reference
