#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace pfluid {

/// Experiment description shared by the run and convergence commands.
/// Required keys: p, delta, nmesh, T, solution. dim defaults to the
/// solution's dimension (2 for "zero"); steps > 0 overrides the schedule.
struct ExperimentConfig {
  double p = 2.0;
  double delta = 0.0;
  double mu = 1.0;
  double delta0 = 1.0;
  int dim = 2;
  std::vector<int> nmesh;
  double c3 = 1.0;
  double T = 0.5;
  int steps = 0;
  std::string solution = "taylor-green-2d";
  std::uint64_t seed = 20261016;
  std::string out = "pfluid-out";

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Throws std::invalid_argument naming a missing or mistyped field.
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace pfluid
