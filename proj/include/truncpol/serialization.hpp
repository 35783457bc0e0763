#pragma once

#include <string>

#include <json.hpp>

#include "truncpol/geometry.hpp"

namespace truncpol {

using Json = nlohmann::json;

// Infinite entries are written as the strings "inf" / "-inf".
Json to_json(Vec const& v);
Json to_json(Mat const& m);
Vec vec_from_json(Json const& j);
Mat mat_from_json(Json const& j);

Json set_to_json(ConstraintSet const& set);
ConstraintSet set_from_json(Json const& j);

Interval interval_from_json(Json const& j);
HPolytope hpolytope_from_json(Json const& j);
Zonotope zonotope_from_json(Json const& j);

Json read_json_file(std::string const& path);

}  // namespace truncpol
