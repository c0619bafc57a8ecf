#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roadplan/planner.hpp"
#include "roadplan/simulator.hpp"

namespace roadplan {

/// Everything an experiment needs, as loaded from a config file. Stored in
/// SI units regardless of the units used on disk.
struct ExperimentConfig {
  std::vector<Road> roads;  // file order; Network::from_roads sorts
  double human_demand_vps = 0.5;
  double auto_demand_vps = 0.3;
  double profit_floor = 0.2;
  double price_cap = 10.0;
  double latency_cap_s = 120.0;
  double unserved_penalty_s = 240.0;
  int latency_grid = 9;
  int price_grid = 9;
  PopulationModel truth = PopulationModel::beta(2.0, 2.0);
  ChoiceNoise noise{ChoiceMode::kNoisy, 0.5};
  LearnSettings learn;
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  Network network() const { return Network::from_roads(roads); }

  /// Planning problem under a given population belief. Planning always uses
  /// the deterministic (rational) choice aggregate; the configured noise
  /// applies to simulated answers and realized choices.
  PlanningProblem problem(PopulationModel population) const;

  void validate() const;

  bool operator==(const ExperimentConfig& other) const;
};

}  // namespace roadplan
