#pragma once

#include <string>

#include "json.hpp"

namespace lorentz::detail {

// Compact JSON with doubles as "%.17g" and non-finite doubles as strings.
std::string write_json(const nlohmann::ordered_json& j);

}  // namespace lorentz::detail
