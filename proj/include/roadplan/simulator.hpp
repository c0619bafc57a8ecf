#pragma once

#include <cstdint>
#include <vector>

#include "roadplan/planner.hpp"
#include "roadplan/preference_learning.hpp"

namespace roadplan {

/// Ground-truth thetas of the simulated service users.
struct Population {
  std::vector<double> thetas;

  int size() const { return static_cast<int>(thetas.size()); }
};

struct LearnSettings {
  int users = 50;
  int query_budget = 20;
  int mh_steps = 1500;
  int mh_burn_in = 500;
  double proposal_sd = 0.1;
  int candidate_latency_points = 8;
  int candidate_price_points = 8;

  void validate() const;
};

/// Fixed probe menu for learning-error reporting, independent of the
/// scenario under study so error curves are comparable across runs.
Menu reference_menu();

Population sample_population(const PopulationModel& truth, int n_users,
                             std::uint64_t seed);

/// All strict trade-off pairs (one option faster, the other cheaper) from a
/// latency x price grid; the deterministic candidate design space.
std::vector<Query> build_candidate_queries(double ell_lo, double ell_hi,
                                           int ell_points, double p_lo,
                                           double p_hi, int p_points);

std::vector<Query> candidate_queries_for(const Network& network,
                                         double price_cap, double latency_cap_s,
                                         const LearnSettings& settings);

/// Simulated elicitation: per user, repeatedly select a query (greedy
/// information gain when active, uniform otherwise), sample a softmax answer
/// at the user's true theta, and refresh the MH posterior; then pool users
/// into a population fit. When per_step_models is given, it receives the
/// population fit after every answer count 1..query_budget.
PopulationModel elicitation_phase(
    const Population& population, const LearnSettings& settings,
    const ChoiceNoise& noise, const std::vector<Query>& candidates,
    std::uint64_t seed, bool active = true,
    std::vector<PopulationModel>* per_step_models = nullptr);

struct SimulatedChoices {
  ChoiceDistribution empirical_q;
  std::vector<int> choices;  // per user
};

SimulatedChoices simulate_choices(const Population& population, const Menu& menu,
                                  const ChoiceNoise& noise, std::uint64_t seed);

/// Outcome of running a plan against realized (empirical) choices.
/// realized_feasible tracks flow feasibility only (does the realized
/// autonomous flow fit every road); the profit floor is reported, not
/// enforced, at this stage.
struct SimulationResult {
  ChoiceDistribution realized_q;
  FlowAssignment realized_flows;
  double realized_J = 0.0;
  double realized_profit = 0.0;
  double realized_unserved_vps = 0.0;
  bool realized_feasible = true;
  double gap_J = 0.0;       // realized minus planned
  double gap_profit = 0.0;
  double gap_q_linf = 0.0;
};

SimulationResult evaluate_realized(const PlanningProblem& problem,
                                   const Plan& plan,
                                   const ChoiceDistribution& empirical_q);

}  // namespace roadplan
