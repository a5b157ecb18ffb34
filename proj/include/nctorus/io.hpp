#pragma once

#include <json.hpp>

#include "nctorus/torus_algebra.hpp"

namespace nct {

// {"band": M, "k": k, "coeffs": [{"m":, "n":, "re": [[..]], "im": [[..]]}, ...]}
nlohmann::json element_to_json(const TorusElement& a);
TorusElement element_from_json(const nlohmann::json& j);

}  // namespace nct
