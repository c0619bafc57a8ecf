#include "roadplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

namespace roadplan {

void PlanningProblem::validate() const {
  if (network.size() == 0) throw ValidationError("problem: empty network");
  if (!(human_demand_vps >= 0.0))
    throw ValidationError("human_demand_vps: must be >= 0");
  if (!(auto_demand_vps >= 0.0))
    throw ValidationError("auto_demand_vps: must be >= 0");
  if (!(profit_floor >= 0.0)) throw ValidationError("profit_floor: must be >= 0");
  if (!(price_cap > 0.0)) throw ValidationError("price_cap: must be > 0");
  double a_max = network.free_flow_latency(network.size() - 1);
  if (!(latency_cap_s >= a_max - kTolerance))
    throw ValidationError("latency_cap_s: must cover the slowest free flow");
  if (!(unserved_penalty_s > latency_cap_s))
    throw ValidationError("unserved_penalty_s: must exceed latency_cap_s");
  if (latency_grid < 2 || price_grid < 2)
    throw ValidationError("grids: need at least 2 points per dimension");
  noise.validate();
}

Menu Plan::menu() const {
  Menu m;
  for (std::size_t i = 0; i < prices.size(); ++i)
    m.options.push_back({static_cast<int>(i), ell.latencies_s[i], prices[i]});
  return m;
}

std::pair<std::vector<double>, double> human_fill(
    const Network& network, const CongestionProfile& ell,
    const std::vector<double>& residual, double human_demand_vps) {
  int n = network.size();
  if (static_cast<int>(ell.latencies_s.size()) != n ||
      static_cast<int>(residual.size()) != n)
    throw ValidationError("human_fill: size mismatch");
  for (double r : residual)
    if (r < 0.0) throw ValidationError("human_fill: negative residual");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return ell.latencies_s[static_cast<std::size_t>(a)] <
           ell.latencies_s[static_cast<std::size_t>(b)];
  });

  std::vector<double> f_h(static_cast<std::size_t>(n), 0.0);
  double remaining = human_demand_vps;
  std::size_t pos = 0;
  while (pos < order.size() && remaining > 0.0) {
    // latency class: consecutive roads within tolerance of each other
    std::size_t end = pos + 1;
    while (end < order.size() &&
           ell.latencies_s[static_cast<std::size_t>(order[end])] -
                   ell.latencies_s[static_cast<std::size_t>(order[end - 1])] <=
               kTolerance)
      ++end;
    double cap = 0.0;
    for (std::size_t s = pos; s < end; ++s)
      cap += residual[static_cast<std::size_t>(order[s])];
    if (cap > 0.0) {
      if (remaining >= cap) {
        for (std::size_t s = pos; s < end; ++s)
          f_h[static_cast<std::size_t>(order[s])] =
              residual[static_cast<std::size_t>(order[s])];
        remaining -= cap;
      } else {
        double share = remaining / cap;
        for (std::size_t s = pos; s < end; ++s)
          f_h[static_cast<std::size_t>(order[s])] =
              residual[static_cast<std::size_t>(order[s])] * share;
        remaining = 0.0;
      }
    }
    pos = end;
  }
  return {std::move(f_h), remaining};
}

bool wardrop_consistent(const Plan& plan, const Network& network, double tol) {
  int n = network.size();
  for (int i = 0; i < n; ++i) {
    if (plan.flows.human_vps[static_cast<std::size_t>(i)] <= tol) continue;
    for (int j = 0; j < n; ++j) {
      if (plan.ell.latencies_s[static_cast<std::size_t>(j)] >=
          plan.ell.latencies_s[static_cast<std::size_t>(i)] - tol)
        continue;
      double leftover = 0.0;
      try {
        leftover = residual_human_capacity(
                       network.road(j), plan.ell.latencies_s[static_cast<std::size_t>(j)],
                       plan.flows.auto_vps[static_cast<std::size_t>(j)]) -
                   plan.flows.human_vps[static_cast<std::size_t>(j)];
      } catch (const AutonomousFlowInfeasible&) {
        leftover = 0.0;  // overloaded road offers no improvement
      }
      if (leftover > tol) return false;
    }
  }
  return true;
}

double profit(const Plan& plan) {
  double total = 0.0;
  for (std::size_t i = 0; i < plan.prices.size(); ++i)
    total += plan.prices[i] * plan.flows.auto_vps[i];
  return total;
}

double objective_J(const Plan& plan, const PlanningProblem& problem) {
  double total_demand = problem.human_demand_vps + problem.auto_demand_vps;
  if (total_demand <= 0.0) throw ZeroDemand("objective: no demand");
  double served = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < plan.prices.size(); ++i) {
    double f = plan.flows.human_vps[i] + plan.flows.auto_vps[i];
    weighted += plan.ell.latencies_s[i] * f;
    served += plan.flows.human_vps[i];
  }
  double unserved = problem.human_demand_vps - served;
  if (unserved < 0.0) unserved = 0.0;
  return (weighted + problem.unserved_penalty_s * unserved) / total_demand;
}

std::pair<Plan, PlanEvaluation> evaluate_menu(const PlanningProblem& problem,
                                              const CongestionProfile& ell,
                                              const std::vector<double>& prices) {
  const Network& net = problem.network;
  int n = net.size();
  if (static_cast<int>(prices.size()) != n)
    throw ValidationError("evaluate_menu: price vector size mismatch");
  ell.validate(net);
  for (int i = 0; i < n; ++i) {
    if (ell.latencies_s[static_cast<std::size_t>(i)] >
        problem.latency_cap_s + kTolerance)
      throw ValidationError("evaluate_menu: latency above cap on road " +
                            std::to_string(i));
    if (prices[static_cast<std::size_t>(i)] < -kTolerance ||
        prices[static_cast<std::size_t>(i)] > problem.price_cap + kTolerance)
      throw ValidationError("evaluate_menu: price outside [0, cap] on road " +
                            std::to_string(i));
  }

  Plan plan;
  plan.ell = ell;
  plan.prices = prices;
  plan.q = aggregate_q(problem.population, plan.menu(), problem.noise);

  bool auto_ok = true;
  std::vector<double> residual(static_cast<std::size_t>(n), 0.0);
  plan.flows.auto_vps.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::size_t s = static_cast<std::size_t>(i);
    plan.flows.auto_vps[s] = problem.auto_demand_vps * plan.q.q[s];
    try {
      residual[s] = residual_human_capacity(net.road(i), ell.latencies_s[s],
                                            plan.flows.auto_vps[s]);
    } catch (const AutonomousFlowInfeasible&) {
      auto_ok = false;
      residual[s] = 0.0;
    }
  }

  auto [f_h, unserved] =
      human_fill(net, ell, residual, problem.human_demand_vps);
  plan.flows.human_vps = std::move(f_h);

  PlanEvaluation eval;
  eval.social_cost_s = objective_J(plan, problem);
  eval.profit = profit(plan);
  eval.unserved_human_vps = unserved;
  eval.feasible = auto_ok && eval.profit >= problem.profit_floor - kTolerance;
  eval.k = -1;
  for (int i = 0; i < n; ++i)
    if (plan.flows.human_vps[static_cast<std::size_t>(i)] > kTolerance)
      eval.k = i;
  return {std::move(plan), eval};
}

namespace {

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    out[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return out;
}

// Row-major odometer over per-slot value lists; visit returns void.
// Calls visit for every combination in lexicographic order.
template <typename Visit>
void enumerate(const std::vector<std::vector<double>>& axes,
               std::vector<double>& slot, std::size_t depth, Visit&& visit) {
  if (depth == axes.size()) {
    visit(slot);
    return;
  }
  for (double v : axes[depth]) {
    slot[depth] = v;
    enumerate(axes, slot, depth + 1, visit);
  }
}

struct SearchState {
  std::optional<std::pair<Plan, PlanEvaluation>> best;
  std::vector<SearchImprovement>* log = nullptr;
  std::size_t index = 0;

  void consider(std::pair<Plan, PlanEvaluation>&& cand) {
    std::size_t at = index++;
    if (!cand.second.feasible) return;
    if (!best || cand.second.social_cost_s < best->second.social_cost_s) {
      if (log)
        log->push_back({at, cand.second.social_cost_s, cand.second.profit});
      best = std::move(cand);
    }
  }
};

}  // namespace

std::pair<Plan, PlanEvaluation> optimize(const PlanningProblem& problem,
                                         std::vector<SearchImprovement>* log) {
  problem.validate();
  const Network& net = problem.network;
  int n = net.size();
  SearchState state;
  state.log = log;
  if (log) log->clear();

  for (int k = 0; k < n; ++k) {  // slowest human-used road (sorted index)
    double pinned = net.free_flow_latency(k);
    std::vector<std::vector<double>> axes;
    for (int j = k + 1; j < n; ++j)
      axes.push_back(linspace(net.free_flow_latency(j), problem.latency_cap_s,
                              problem.latency_grid));
    for (int i = 0; i < n; ++i)
      axes.push_back(linspace(0.0, problem.price_cap, problem.price_grid));

    std::vector<double> slot(axes.size());
    enumerate(axes, slot, 0, [&](const std::vector<double>& values) {
      CongestionProfile ell;
      ell.latencies_s.assign(static_cast<std::size_t>(n), pinned);
      for (int j = k + 1; j < n; ++j)
        ell.latencies_s[static_cast<std::size_t>(j)] =
            values[static_cast<std::size_t>(j - k - 1)];
      std::vector<double> prices(values.begin() + (n - k - 1), values.end());
      state.consider(evaluate_menu(problem, ell, prices));
    });
  }
  if (!state.best) throw Infeasible("optimize: no feasible candidate");
  return std::move(*state.best);
}

std::pair<Plan, PlanEvaluation> brute_force(const PlanningProblem& problem) {
  problem.validate();
  const Network& net = problem.network;
  int n = net.size();
  double candidates = 1.0;
  for (int i = 0; i < n; ++i)
    candidates *= static_cast<double>(problem.latency_grid) *
                  static_cast<double>(problem.price_grid);
  if (n > 3 || candidates > 1e7)
    throw SearchSpaceTooLarge("brute_force: candidate count over budget");

  std::vector<std::vector<double>> axes;
  for (int i = 0; i < n; ++i)
    axes.push_back(linspace(net.free_flow_latency(i), problem.latency_cap_s,
                            problem.latency_grid));
  for (int i = 0; i < n; ++i)
    axes.push_back(linspace(0.0, problem.price_cap, problem.price_grid));

  SearchState state;
  std::vector<double> slot(axes.size());
  enumerate(axes, slot, 0, [&](const std::vector<double>& values) {
    CongestionProfile ell;
    ell.latencies_s.assign(values.begin(), values.begin() + n);
    std::vector<double> prices(values.begin() + n, values.end());
    state.consider(evaluate_menu(problem, ell, prices));
  });
  if (!state.best) throw Infeasible("brute_force: no feasible candidate");
  return std::move(*state.best);
}

double latency_grid_step(const PlanningProblem& problem) {
  double step = 0.0;
  for (int i = 0; i < problem.network.size(); ++i)
    step = std::max(step,
                    (problem.latency_cap_s - problem.network.free_flow_latency(i)) /
                        (problem.latency_grid - 1));
  return step;
}

bool proposition_holds(const Plan& plan, const Network& network,
                       double latency_tol) {
  int k = -1;
  for (int i = 0; i < network.size(); ++i)
    if (plan.flows.human_vps[static_cast<std::size_t>(i)] > kTolerance) k = i;
  if (k < 0) return true;
  double a_k = network.free_flow_latency(k);
  for (int i = 0; i <= k; ++i)
    if (plan.ell.latencies_s[static_cast<std::size_t>(i)] > a_k + latency_tol)
      return false;
  return true;
}

Plan prefix_transform(const Plan& plan, const PlanningProblem& problem,
                        const WeightVector& w, double ell_k_new) {
  if (!(w.w_price() > 0.0))
    throw ZeroPriceWeight("transform: price weight must be positive");
  if (problem.population.family() != PopulationModel::Family::kEmpirical)
    throw ValidationError("transform: population must be homogeneous at w");
  for (double t : problem.population.samples())
    if (std::fabs(t - w.theta) > kTolerance)
      throw ValidationError("transform: population must be homogeneous at w");

  int k = -1;
  for (std::size_t i = 0; i < plan.flows.human_vps.size(); ++i)
    if (plan.flows.human_vps[i] > kTolerance) k = static_cast<int>(i);
  if (k < 0) throw NotImprovable("transform: no human-used road");

  double a_k = problem.network.free_flow_latency(k);
  double ell_k = plan.ell.latencies_s[static_cast<std::size_t>(k)];
  if (ell_k <= a_k + kTolerance)
    throw NotImprovable("transform: road k already at free flow");
  if (ell_k_new < a_k - kTolerance)
    throw ValidationError("transform: ell_k_new below free flow of road k");
  if (!(ell_k_new < ell_k))
    throw NotImprovable("transform: needs a strict latency drop");

  double eps = (w.w_latency() / w.w_price()) * (ell_k - ell_k_new);

  std::vector<int> dominated = dominated_set(plan.menu());
  std::vector<bool> bump(plan.prices.size(), false);
  for (int i = 0; i <= k; ++i) bump[static_cast<std::size_t>(i)] = true;
  for (int i : dominated) bump[static_cast<std::size_t>(i)] = true;

  std::vector<double> prices = plan.prices;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!bump[i]) continue;
    prices[i] += eps;
    if (prices[i] > problem.price_cap + kTolerance)
      throw PriceCapExceeded("transform: bumped price exceeds the cap on road " +
                             std::to_string(i));
  }

  CongestionProfile ell = plan.ell;
  for (int i = 0; i <= k; ++i)
    ell.latencies_s[static_cast<std::size_t>(i)] = ell_k_new;

  return evaluate_menu(problem, ell, prices).first;
}

}  // namespace roadplan
