#pragma once

#include <utility>
#include <vector>

#include "roadplan/choice_model.hpp"
#include "roadplan/common.hpp"
#include "roadplan/population.hpp"
#include "roadplan/road_network.hpp"

namespace roadplan {

struct PlanningProblem {
  Network network;
  double human_demand_vps = 0.0;     // F_h
  double auto_demand_vps = 0.0;      // F_a
  double profit_floor = 0.0;         // P_min, currency/s
  double price_cap = 10.0;           // p_max
  double latency_cap_s = 120.0;      // ell_max
  double unserved_penalty_s = 240.0; // latency charged per unserved human
  int latency_grid = 9;              // grid points per free road
  int price_grid = 9;                // grid points per price
  PopulationModel population = PopulationModel::uniform();
  ChoiceNoise noise;                 // mode used by aggregate_q during planning

  void validate() const;
};

/// A posted (latency, price) menu plus the flows it induces. f_a = F_a * q
/// by construction: service demand is conserved across roads.
struct Plan {
  CongestionProfile ell;
  std::vector<double> prices;
  FlowAssignment flows;
  ChoiceDistribution q;

  Menu menu() const;
};

struct PlanEvaluation {
  double social_cost_s = 0.0;        // J, flow-averaged seconds
  double profit = 0.0;               // currency/s
  double unserved_human_vps = 0.0;
  bool feasible = false;             // profit floor met and f_a fits everywhere
  int k = -1;                        // highest-index human-used road, -1 if none
};

/// Selfish (quickest-available) human routing: fill latency classes in
/// ascending order, splitting within a class proportionally to residual
/// capacity; returns per-road human flow and the unserved remainder.
std::pair<std::vector<double>, double> human_fill(
    const Network& network, const CongestionProfile& ell,
    const std::vector<double>& residual, double human_demand_vps);

/// No human on a used road could switch to a strictly faster road with spare
/// capacity.
bool wardrop_consistent(const Plan& plan, const Network& network, double tol);

/// Revenue rate of the menu: sum of price_i * f_a_i.
double profit(const Plan& plan);

/// Flow-averaged latency, with unserved human demand charged at the penalty
/// latency. Lower is better.
double objective_J(const Plan& plan, const PlanningProblem& problem);

std::pair<Plan, PlanEvaluation> evaluate_menu(const PlanningProblem& problem,
                                              const CongestionProfile& ell,
                                              const std::vector<double>& prices);

/// One row per candidate that improved the incumbent during a search.
struct SearchImprovement {
  std::size_t candidate_index = 0;
  double social_cost_s = 0.0;
  double profit = 0.0;
};

/// Structure-reduced deterministic grid search: for each k, roads 1..k are
/// pinned to the free-flow latency of road k (the slowest human-used road),
/// remaining latencies and all prices range over grids. First-in-order
/// minimum-J feasible candidate wins. Throws Infeasible when nothing passes.
std::pair<Plan, PlanEvaluation> optimize(const PlanningProblem& problem,
                                         std::vector<SearchImprovement>* log = nullptr);

/// Exhaustive grid over all latencies and prices; validation oracle for
/// optimize. Throws SearchSpaceTooLarge beyond 1e7 candidates.
std::pair<Plan, PlanEvaluation> brute_force(const PlanningProblem& problem);

/// Coarsest latency-grid step across roads; the natural optimality slack for
/// grid-search results.
double latency_grid_step(const PlanningProblem& problem);

/// Structure every optimal plan has: each road up to the slowest human-used
/// one (index k) sits at most latency_tol above a_k. Human usage is judged
/// at the fixed flow tolerance kTolerance; vacuously true with no human flow.
bool proposition_holds(const Plan& plan, const Network& network,
                       double latency_tol);

/// The improvement step behind that structure, run as a real transformation:
/// lower roads 1..k to ell_k_new and raise prices on [k] and on dominated
/// options by eps = (w1/w2) * (ell_k - ell_k_new), then recompute choices and
/// flows. Requires a homogeneous population at w (point mass), since that is
/// what the exchange-rate argument covers.
Plan prefix_transform(const Plan& plan, const PlanningProblem& problem,
                      const WeightVector& w, double ell_k_new);

}  // namespace roadplan
