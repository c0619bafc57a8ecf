#include "roadplan/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "roadplan/rng.hpp"

namespace roadplan {

void LearnSettings::validate() const {
  if (users < 1) throw ValidationError("learning.users: must be >= 1");
  if (query_budget < 1)
    throw ValidationError("learning.query_budget: must be >= 1");
  if (mh_burn_in < 0 || mh_steps < mh_burn_in + 100)
    throw ValidationError("learning.mh_steps: need steps >= burn_in + 100");
  if (!(proposal_sd > 0.0))
    throw ValidationError("learning.proposal_sd: must be > 0");
  if (candidate_latency_points < 2 || candidate_price_points < 2)
    throw ValidationError("learning.candidate grid: need >= 2 points per axis");
}

Menu reference_menu() {
  // Indifference cuts at theta = 0.8 and 0.9 probe the mid-high and tail
  // quantiles where plausible populations differ most in price sensitivity.
  return Menu{{{0, 50.0, 3.0}, {1, 58.0, 1.0}, {2, 67.0, 0.0}}};
}

Population sample_population(const PopulationModel& truth, int n_users,
                             std::uint64_t seed) {
  if (n_users < 1) throw ValidationError("population: n_users must be >= 1");
  Rng rng(seed);
  Population pop;
  pop.thetas.reserve(static_cast<std::size_t>(n_users));
  for (int u = 0; u < n_users; ++u) pop.thetas.push_back(truth.sample(rng));
  return pop;
}

std::vector<Query> build_candidate_queries(double ell_lo, double ell_hi,
                                           int ell_points, double p_lo,
                                           double p_hi, int p_points) {
  std::vector<MenuOption> options;
  for (int i = 0; i < ell_points; ++i) {
    double ell = ell_lo + (ell_hi - ell_lo) * i / (ell_points - 1);
    for (int j = 0; j < p_points; ++j) {
      double price = p_lo + (p_hi - p_lo) * j / (p_points - 1);
      options.push_back({0, ell, price});
    }
  }
  std::vector<Query> queries;
  for (const MenuOption& a : options)
    for (const MenuOption& b : options)
      if (a.ell_s < b.ell_s && a.price > b.price) queries.push_back({a, b});
  return queries;
}

std::vector<Query> candidate_queries_for(const Network& network,
                                         double price_cap, double latency_cap_s,
                                         const LearnSettings& settings) {
  return build_candidate_queries(network.free_flow_latency(0), latency_cap_s,
                                 settings.candidate_latency_points, 0.0,
                                 price_cap, settings.candidate_price_points);
}

PopulationModel elicitation_phase(
    const Population& population, const LearnSettings& settings,
    const ChoiceNoise& noise, const std::vector<Query>& candidates,
    std::uint64_t seed, bool active,
    std::vector<PopulationModel>* per_step_models) {
  settings.validate();
  if (candidates.empty())
    throw ValidationError("elicitation: candidate set is empty");
  if (!(noise.beta > 0.0))
    throw ValidationError("elicitation: answers need noise.beta > 0");
  if (population.size() < 1) throw ValidationError("elicitation: no users");

  PopulationModel prior = PopulationModel::uniform();
  int budget = settings.query_budget;
  // history[u][t] = user u's posterior after t+1 answers
  std::vector<std::vector<PosteriorSamples>> history(
      static_cast<std::size_t>(population.size()));

  for (int u = 0; u < population.size(); ++u) {
    std::uint64_t user_seed = derive_seed(seed, static_cast<std::uint64_t>(u));
    double theta_u = population.thetas[static_cast<std::size_t>(u)];
    std::vector<Observation> obs;
    obs.reserve(static_cast<std::size_t>(budget));
    auto& rows = history[static_cast<std::size_t>(u)];
    rows.reserve(static_cast<std::size_t>(budget));

    for (int t = 0; t < budget; ++t) {
      std::uint64_t step_tag = static_cast<std::uint64_t>(3 * t);
      PosteriorSamples post =
          mh_posterior(obs, prior, noise, settings.mh_steps,
                       settings.mh_burn_in, settings.proposal_sd,
                       derive_seed(user_seed, step_tag));
      if (t > 0) rows.push_back(std::move(post));

      const Query* query;
      if (active) {
        query = &select_query(rows.empty() ? post : rows.back(), candidates,
                              noise);
      } else {
        Rng pick(derive_seed(user_seed, step_tag + 1));
        query = &candidates[static_cast<std::size_t>(
            pick.uniform_int(static_cast<int>(candidates.size())))];
      }

      double p0 = answer_likelihood(theta_u, *query, 0, noise);
      Rng coin(derive_seed(user_seed, step_tag + 2));
      int answer = coin.uniform() < p0 ? 0 : 1;
      obs.push_back({u, *query, answer});
    }
    rows.push_back(mh_posterior(obs, prior, noise, settings.mh_steps,
                                settings.mh_burn_in, settings.proposal_sd,
                                derive_seed(user_seed,
                                            static_cast<std::uint64_t>(3 * budget))));
  }

  if (per_step_models) {
    per_step_models->clear();
    for (int t = 0; t < budget; ++t) {
      std::vector<PosteriorSamples> slice;
      slice.reserve(history.size());
      for (const auto& rows : history)
        slice.push_back(rows[static_cast<std::size_t>(t)]);
      per_step_models->push_back(fit_population(slice));
    }
  }

  std::vector<PosteriorSamples> finals;
  finals.reserve(history.size());
  for (auto& rows : history) finals.push_back(std::move(rows.back()));
  return fit_population(finals);
}

SimulatedChoices simulate_choices(const Population& population, const Menu& menu,
                                  const ChoiceNoise& noise, std::uint64_t seed) {
  if (population.size() < 1) throw ValidationError("simulate: no users");
  SimulatedChoices out;
  out.choices.reserve(static_cast<std::size_t>(population.size()));
  out.empirical_q.q.assign(static_cast<std::size_t>(menu.size()), 0.0);
  double w = 1.0 / population.size();
  for (int u = 0; u < population.size(); ++u) {
    int pick = sample_user_choice(
        WeightVector{population.thetas[static_cast<std::size_t>(u)]}, menu,
        noise, derive_seed(seed, static_cast<std::uint64_t>(u)));
    out.choices.push_back(pick);
    out.empirical_q.q[static_cast<std::size_t>(pick)] += w;
  }
  out.empirical_q.validate();
  return out;
}

SimulationResult evaluate_realized(const PlanningProblem& problem,
                                   const Plan& plan,
                                   const ChoiceDistribution& empirical_q) {
  const Network& net = problem.network;
  int n = net.size();
  if (static_cast<int>(empirical_q.q.size()) != n)
    throw ValidationError("evaluate_realized: q size mismatch");

  SimulationResult res;
  res.realized_q = empirical_q;
  res.realized_flows.auto_vps.resize(static_cast<std::size_t>(n));
  std::vector<double> residual(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    std::size_t s = static_cast<std::size_t>(i);
    res.realized_flows.auto_vps[s] = problem.auto_demand_vps * empirical_q.q[s];
    try {
      residual[s] = residual_human_capacity(net.road(i),
                                            plan.ell.latencies_s[s],
                                            res.realized_flows.auto_vps[s]);
    } catch (const AutonomousFlowInfeasible&) {
      res.realized_feasible = false;
      residual[s] = 0.0;
    }
  }
  auto [f_h, unserved] =
      human_fill(net, plan.ell, residual, problem.human_demand_vps);
  res.realized_flows.human_vps = std::move(f_h);
  res.realized_unserved_vps = unserved;

  Plan realized = plan;
  realized.q = empirical_q;
  realized.flows = res.realized_flows;
  res.realized_J = objective_J(realized, problem);
  res.realized_profit = profit(realized);

  res.gap_J = res.realized_J - objective_J(plan, problem);
  res.gap_profit = res.realized_profit - profit(plan);
  for (int i = 0; i < n; ++i)
    res.gap_q_linf = std::max(
        res.gap_q_linf, std::fabs(empirical_q.q[static_cast<std::size_t>(i)] -
                                  plan.q.q[static_cast<std::size_t>(i)]));
  return res;
}

}  // namespace roadplan
