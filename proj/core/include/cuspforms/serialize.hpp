#pragma once

// Bit-exact JSON round-trips for the value types: cyclotomic scalars,
// windowed tables on lattice cosets, parabolic subgroup data, and lifted
// group functions.  Coefficients serialize as decimal strings (they exceed
// every fixed-width integer), lattice points as base-p digit vectors in
// coordinate order.  from_* functions validate and re-canonicalize, so a
// hand-edited file either loads to a well-formed value or throws
// ValidationError.

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "cuspforms/cyclotomic.hpp"
#include "cuspforms/gln.hpp"
#include "cuspforms/group.hpp"
#include "cuspforms/lattice.hpp"

namespace cuspforms {

using Json = nlohmann::ordered_json;

Json cyclotomic_to_json(const Cyclotomic& v);
Cyclotomic cyclotomic_from_json(std::int64_t p, const Json& j);

Json window_to_json(const LatticeWindow& w);
LatticeWindow window_from_json(const Json& j);

Json schwartz_to_json(const SchwartzFunction& f);
SchwartzFunction schwartz_from_json(const Json& j);

Json parabolic_to_json(const ParabolicData& P);
ParabolicData parabolic_from_json(const Json& j);

Json group_function_to_json(const GroupFunction& f);
GroupFunction group_function_from_json(const Json& j);

// File helpers (pretty-printed, trailing newline, stable field order).
void save_json(const Json& j, const std::string& path);
Json load_json(const std::string& path);

}  // namespace cuspforms
