#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace warpfield::cli {

enum ExitCode { kPass = 0, kConfigError = 1, kNumericalFailure = 2 };

// Usage or configuration problem; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
};

struct CommandResult {
  int exit_code = kPass;
  std::string output;
  std::vector<std::string> failures;
};

// Reads the file, checks "command" and validates against the embedded schema.
nlohmann::json load_config(const std::string& path, const std::string& command);
const char* schema_text(const std::string& command);

CommandResult cmd_npoint(const nlohmann::json& cfg, const Options& opt);
CommandResult cmd_geometry(const nlohmann::json& cfg, const Options& opt);
CommandResult cmd_verify(const nlohmann::json& cfg, const Options& opt);
CommandResult cmd_car(const nlohmann::json& cfg, const Options& opt);

std::string resolve_format(const nlohmann::json& cfg, const Options& opt);
std::optional<std::string> resolve_out(const nlohmann::json& cfg, const Options& opt);
std::uint64_t resolve_seed(const nlohmann::json& cfg, const Options& opt, std::uint64_t fallback);

}  // namespace warpfield::cli
