#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "warpfield/errors.hpp"

using namespace warpfield::cli;

namespace {

int dispatch(const std::string& command, const Options& opt) {
  try {
    const auto cfg = load_config(opt.config_path, command);
    CommandResult res;
    if (command == "npoint") res = cmd_npoint(cfg, opt);
    if (command == "geometry") res = cmd_geometry(cfg, opt);
    if (command == "verify") res = cmd_verify(cfg, opt);
    if (command == "car") res = cmd_car(cfg, opt);

    if (const auto out = resolve_out(cfg, opt)) {
      std::ofstream f(*out, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + *out);
      f << res.output;
    } else {
      std::cout << res.output;
    }
    for (const auto& m : res.failures) std::cerr << "FAIL " << m << '\n';
    return res.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const warpfield::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warpfield: warped convolutions, thermal fields, wedge geometry and CAR deformations"};
  app.require_subcommand(1);

  Options opt;
  std::string format;
  std::uint64_t seed = 0;
  const std::pair<const char*, const char*> commands[] = {
      {"npoint", "Compare deformed thermal n-point functions with their closed form"},
      {"geometry", "Answer wedge geometry queries"},
      {"verify", "Run the acceptance criteria"},
      {"car", "Deformed CAR observables: vacuum invariance and fixed-point test"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "JSON config")->required();
    sub->add_option("--out", opt.out, "Output file (default: stdout)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "Random seed override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--format")) opt.format = format;
    if (sub->count("--seed")) opt.seed = seed;
    return dispatch(sub->get_name(), opt);
  }
  return kConfigError;
}
