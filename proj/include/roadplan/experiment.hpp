#pragma once

#include <string>
#include <vector>

#include "roadplan/config.hpp"

namespace roadplan {

/// One planning strategy carried through to realized outcomes.
struct ArmOutcome {
  std::string name;
  Plan plan;
  PlanEvaluation planned;  // under the belief the arm planned with
  SimulationResult realized;
  std::vector<SearchImprovement> search_log;  // empty for fixed menus
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  PopulationModel learned = PopulationModel::uniform();
  std::vector<double> learning_curve;  // error vs truth after each answer
  ArmOutcome learned_arm;
  ArmOutcome oracle_arm;
  ArmOutcome zero_price_arm;
};

/// Full pipeline: sample the true population, learn it from queries, plan
/// under the learned belief, and compare realized outcomes against the
/// oracle planner (true population) and the no-influence zero-price menu.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Stream tags for the per-phase seeds (derive_seed(config.seed, tag)).
inline constexpr std::uint64_t kSeedPopulation = 101;
inline constexpr std::uint64_t kSeedElicitation = 102;
inline constexpr std::uint64_t kSeedChoices = 103;

}  // namespace roadplan
