#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace warpfield::cli {

// Validates against the JSON Schema keywords the bundled schemas use:
// type, properties, required, additionalProperties (boolean), items,
// minItems, maxItems, enum, minimum, maximum, exclusiveMinimum.
// Returns one message per violation, prefixed with the JSON pointer.
std::vector<std::string> validate_schema(const nlohmann::json& instance, const nlohmann::json& schema,
                                         const std::string& pointer = "");

}  // namespace warpfield::cli
