// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fails.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "suite.hpp"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

int main() {
  using namespace warpfield::suite;
  bool all = true;
  SuiteConfig cfg;
  for (int id = 1; id <= 8; ++id) {
    const auto r = run_criterion(id, cfg);
    std::cout << "criterion " << id << ": " << (r.passed() ? "PASS" : "FAIL") << "  " << r.title << "  ("
              << r.checks.size() << " checks, " << format_double(r.seconds) << " s)";
    for (const auto& f : r.failing()) std::cout << "\n    failing: " << f;
    if (!r.error.empty()) std::cout << "\n    error: " << r.error;
    std::cout << std::endl;
    all = all && r.passed();
  }

  const auto dir = std::filesystem::temp_directory_path() / "warpfield_acceptance";
  std::filesystem::create_directories(dir);
  const std::string base = std::string(WARPFIELD_CLI) + " verify --config " + WARPFIELD_CONFIG_DIR + "/verify.json --seed 4242";
  int rc1 = 0, rc2 = 0;
  bool same = true;
  for (const char* fmt : {"csv", "json"}) {
    const auto a = dir / (std::string("a.") + fmt), b = dir / (std::string("b.") + fmt);
    rc1 |= run(base + " --format " + fmt + " --out " + a.string());
    rc2 |= run(base + " --format " + fmt + " --out " + b.string());
    const auto sa = slurp(a);
    same = same && !sa.empty() && sa == slurp(b);
  }
  const bool ok9 = rc1 == 0 && rc2 == 0 && same;
  std::cout << "criterion 9: " << (ok9 ? "PASS" : "FAIL") << "  CLI determinism  (exit codes " << rc1 << ", " << rc2
            << "; outputs " << (same ? "byte-identical" : "differ") << ")" << std::endl;
  all = all && ok9;
  return all ? 0 : 1;
}
