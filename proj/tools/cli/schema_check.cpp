#include "schema_check.hpp"

#include <algorithm>
#include <cmath>

namespace warpfield::cli {

namespace {

bool has_type(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "number") return v.is_number();
  if (t == "integer") return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
  return false;
}

std::string where(const std::string& pointer) { return pointer.empty() ? "/" : pointer; }

}  // namespace

std::vector<std::string> validate_schema(const nlohmann::json& v, const nlohmann::json& s, const std::string& ptr) {
  std::vector<std::string> errs;
  auto fail = [&](const std::string& m) { errs.push_back(where(ptr) + ": " + m); };

  if (s.contains("type")) {
    std::vector<std::string> types;
    if (s["type"].is_array())
      types = s["type"].get<std::vector<std::string>>();
    else
      types.push_back(s["type"].get<std::string>());
    if (std::none_of(types.begin(), types.end(), [&](const std::string& t) { return has_type(v, t); })) {
      fail("expected type " + s["type"].dump());
      return errs;
    }
  }
  if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end())
    fail("value " + v.dump() + " not in " + s["enum"].dump());
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>()) fail("below minimum " + s["minimum"].dump());
    if (s.contains("maximum") && x > s["maximum"].get<double>()) fail("above maximum " + s["maximum"].dump());
    if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>())
      fail("must exceed " + s["exclusiveMinimum"].dump());
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& k : s["required"])
        if (!v.contains(k.get<std::string>())) fail("missing required property \"" + k.get<std::string>() + "\"");
    const bool closed = s.contains("additionalProperties") && s["additionalProperties"].is_boolean() &&
                        !s["additionalProperties"].get<bool>();
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (s.contains("properties") && s["properties"].contains(it.key())) {
        auto sub = validate_schema(it.value(), s["properties"][it.key()], ptr + "/" + it.key());
        errs.insert(errs.end(), sub.begin(), sub.end());
      } else if (closed) {
        fail("unknown property \"" + it.key() + "\"");
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) fail("too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) fail("too many items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) {
        auto sub = validate_schema(v[i], s["items"], ptr + "/" + std::to_string(i));
        errs.insert(errs.end(), sub.begin(), sub.end());
      }
  }
  return errs;
}

}  // namespace warpfield::cli
