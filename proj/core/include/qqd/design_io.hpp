#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "qqd/design.hpp"

namespace qqd {

// Text table format:
//
//   n p q
//   s_1 ... s_{p+q}
//   <n rows: p integer levels, then q quantitative entries>
//
// A quantitative entry written as an integer is a level on the midpoint
// lattice; anything with a decimal point or exponent is a raw value in [0,1].
// Blank lines and text after '#' are ignored.
Design read_design_text(std::istream& in);
Design parse_design_text(const std::string& text);
void write_design_text(std::ostream& out, const Design& design);

// JSON mirror: {"n", "p", "q", "levels", "rows"} with the same integer/real
// convention for quantitative entries.
Design design_from_json(const nlohmann::json& j);
nlohmann::json design_to_json(const Design& design);

/// Reads a design file, picking JSON when the first non-blank byte is '{'.
Design load_design(const std::string& path);
void save_design(const std::string& path, const Design& design, bool as_json = false);

}  // namespace qqd
