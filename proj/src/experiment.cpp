#include "roadplan/experiment.hpp"

#include "roadplan/rng.hpp"

namespace roadplan {

namespace {

// Planned numbers stay under the arm's own belief; realized numbers come
// from the sampled population, so gaps fold in model and sampling error.
ArmOutcome finish_arm(std::string name, std::pair<Plan, PlanEvaluation> planned,
                      const PlanningProblem& problem_truth,
                      const Population& pop, const ChoiceNoise& noise,
                      std::uint64_t choices_seed,
                      std::vector<SearchImprovement> search_log = {}) {
  ArmOutcome arm;
  arm.name = std::move(name);
  arm.plan = std::move(planned.first);
  arm.planned = planned.second;
  arm.search_log = std::move(search_log);
  SimulatedChoices sim =
      simulate_choices(pop, arm.plan.menu(), noise, choices_seed);
  arm.realized = evaluate_realized(problem_truth, arm.plan, sim.empirical_q);
  return arm;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.seed = config.seed;

  Population pop =
      sample_population(config.truth, config.learn.users,
                        derive_seed(config.seed, kSeedPopulation));

  Network net = config.network();
  std::vector<Query> candidates = candidate_queries_for(
      net, config.price_cap, config.latency_cap_s, config.learn);
  std::vector<PopulationModel> per_step;
  report.learned = elicitation_phase(
      pop, config.learn, config.noise, candidates,
      derive_seed(config.seed, kSeedElicitation), /*active=*/true, &per_step);
  Menu probe = reference_menu();
  report.learning_curve.reserve(per_step.size());
  for (const PopulationModel& model : per_step)
    report.learning_curve.push_back(learning_error(model, config.truth, probe));

  PlanningProblem problem_truth = config.problem(config.truth);
  std::uint64_t choices_seed = derive_seed(config.seed, kSeedChoices);

  std::vector<SearchImprovement> learned_log;
  auto learned_plan = optimize(config.problem(report.learned), &learned_log);
  report.learned_arm =
      finish_arm("learned", std::move(learned_plan), problem_truth, pop,
                 config.noise, choices_seed, std::move(learned_log));

  std::vector<SearchImprovement> oracle_log;
  auto oracle_plan = optimize(problem_truth, &oracle_log);
  report.oracle_arm =
      finish_arm("oracle", std::move(oracle_plan), problem_truth, pop,
                 config.noise, choices_seed, std::move(oracle_log));

  // No-influence baseline: free-flow latencies, zero prices, evaluated under
  // the true population. Typically fails the profit floor by construction;
  // its planned.feasible flag records that honestly.
  CongestionProfile free_flow;
  free_flow.latencies_s.resize(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i)
    free_flow.latencies_s[static_cast<std::size_t>(i)] =
        net.free_flow_latency(i);
  std::vector<double> zero(static_cast<std::size_t>(net.size()), 0.0);
  report.zero_price_arm =
      finish_arm("zero_price", evaluate_menu(problem_truth, free_flow, zero),
                 problem_truth, pop, config.noise, choices_seed);

  return report;
}

}  // namespace roadplan
