#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace warpfield::suite {

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  std::string relation;  // "<", ">", "==", "flag"
  bool passed = false;
  bool timing = false;   // value excluded from deterministic output
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double budget = 0.0;
  std::string error;  // exception text when the criterion aborted

  bool passed() const;
  std::vector<std::string> failing() const;
};

struct SuiteConfig {
  std::uint64_t seed = 20240917;
  std::vector<int> criteria{1, 2, 3, 4, 5, 6, 7, 8};
  // Replace every deformation parameter by 0; kappa-dependence checks are skipped.
  bool degenerate_kappa = false;
  // Negative control: feed a non-antisymmetric theta into the deformation engine.
  bool break_theta_antisymmetry = false;
  double budget_scale = 1.0;
  std::map<std::string, double> tolerances = default_tolerances();

  static std::map<std::string, double> default_tolerances();
  double tol(const std::string& key) const;
};

CriterionResult run_criterion(int id, const SuiteConfig& cfg);
std::vector<CriterionResult> run_suite(const SuiteConfig& cfg);

// Deterministic report: no timings, fixed formatting.
std::string to_csv(const std::vector<CriterionResult>& results);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

std::string format_double(double v);

// Product of random ambient boosts and rotations in SO(1,4).
Eigen::Matrix<double, 5, 5> random_desitter(std::mt19937_64& g);

}  // namespace warpfield::suite
