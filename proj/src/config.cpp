#include "roadplan/config.hpp"

namespace roadplan {

PlanningProblem ExperimentConfig::problem(PopulationModel population) const {
  PlanningProblem p;
  p.network = network();
  p.human_demand_vps = human_demand_vps;
  p.auto_demand_vps = auto_demand_vps;
  p.profit_floor = profit_floor;
  p.price_cap = price_cap;
  p.latency_cap_s = latency_cap_s;
  p.unserved_penalty_s = unserved_penalty_s;
  p.latency_grid = latency_grid;
  p.price_grid = price_grid;
  p.population = std::move(population);
  p.noise = ChoiceNoise{ChoiceMode::kDeterministic, noise.beta};
  return p;
}

void ExperimentConfig::validate() const {
  if (roads.empty()) throw ValidationError("network.roads: must be non-empty");
  problem(truth).validate();  // road, demand, and grid invariants
  noise.validate();
  learn.validate();
  if (output_dir.empty()) throw ValidationError("output_dir: must be non-empty");
}

bool ExperimentConfig::operator==(const ExperimentConfig& other) const {
  auto road_eq = [](const Road& a, const Road& b) {
    return a.length_m == b.length_m && a.free_speed_mps == b.free_speed_mps &&
           a.vehicle_space_m == b.vehicle_space_m &&
           a.headway_human_s == b.headway_human_s &&
           a.headway_auto_s == b.headway_auto_s;
  };
  if (roads.size() != other.roads.size()) return false;
  for (std::size_t i = 0; i < roads.size(); ++i)
    if (!road_eq(roads[i], other.roads[i])) return false;
  return human_demand_vps == other.human_demand_vps &&
         auto_demand_vps == other.auto_demand_vps &&
         profit_floor == other.profit_floor && price_cap == other.price_cap &&
         latency_cap_s == other.latency_cap_s &&
         unserved_penalty_s == other.unserved_penalty_s &&
         latency_grid == other.latency_grid && price_grid == other.price_grid &&
         truth == other.truth && noise.mode == other.noise.mode &&
         noise.beta == other.noise.beta && learn.users == other.learn.users &&
         learn.query_budget == other.learn.query_budget &&
         learn.mh_steps == other.learn.mh_steps &&
         learn.mh_burn_in == other.learn.mh_burn_in &&
         learn.proposal_sd == other.learn.proposal_sd &&
         learn.candidate_latency_points == other.learn.candidate_latency_points &&
         learn.candidate_price_points == other.learn.candidate_price_points &&
         seed == other.seed && output_dir == other.output_dir;
}

}  // namespace roadplan
