#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "roadplan/planner.hpp"
#include "roadplan/rng.hpp"
#include "support/scenarios.hpp"

using namespace roadplan;
using namespace roadplan::fixtures;

namespace {

Network two_roads() {
  // free-flow latencies 40 and 50
  return Network::from_roads({make_road(1000, 25), make_road(1000, 20)});
}

PlanningProblem small_problem(PopulationModel pop, double f_h = 0.4,
                              double f_a = 0.2) {
  PlanningProblem p;
  p.network = two_roads();
  p.human_demand_vps = f_h;
  p.auto_demand_vps = f_a;
  p.profit_floor = 0.0;
  p.price_cap = 10.0;
  p.latency_cap_s = 120.0;
  p.unserved_penalty_s = 240.0;
  p.latency_grid = 5;
  p.price_grid = 5;
  p.population = std::move(pop);
  return p;
}

}  // namespace

TEST_CASE("human_fill greedy examples") {
  Network net = two_roads();
  CongestionProfile ell{{50.0, 60.0}};

  auto [f1, u1] = human_fill(net, ell, {0.3, 0.5}, 0.4);
  CHECK(f1[0] == doctest::Approx(0.3));
  CHECK(f1[1] == doctest::Approx(0.1));
  CHECK(u1 == doctest::Approx(0.0));

  auto [f2, u2] = human_fill(net, ell, {0.3, 0.5}, 0.9);
  CHECK(f2[0] == doctest::Approx(0.3));
  CHECK(f2[1] == doctest::Approx(0.5));
  CHECK(u2 == doctest::Approx(0.1));

  auto [f3, u3] = human_fill(net, ell, {0.3, 0.5}, 0.0);
  CHECK(f3 == std::vector<double>{0.0, 0.0});
  CHECK(u3 == 0.0);
}

TEST_CASE("human_fill splits equal-latency classes proportionally") {
  Network net = two_roads();
  auto [f, u] = human_fill(net, CongestionProfile{{55.0, 55.0}}, {0.3, 0.1}, 0.2);
  CHECK(f[0] == doctest::Approx(0.15));
  CHECK(f[1] == doctest::Approx(0.05));
  CHECK(u == doctest::Approx(0.0));

  // zero-capacity class is skipped outright
  auto [g, v] = human_fill(net, CongestionProfile{{55.0, 60.0}}, {0.0, 0.2}, 0.5);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(0.2));
  CHECK(v == doctest::Approx(0.3));
}

TEST_CASE("wardrop consistency") {
  Network net = two_roads();
  Plan plan;
  plan.ell = CongestionProfile{{50.0, 60.0}};
  plan.prices = {0.0, 0.0};
  plan.flows.auto_vps = {0.0, 0.0};

  // humans on the slow road while the fast one has room: inconsistent
  plan.flows.human_vps = {0.0, 0.1};
  CHECK_FALSE(wardrop_consistent(plan, net, 1e-6));

  // no human flow at all: vacuously consistent
  plan.flows.human_vps = {0.0, 0.0};
  CHECK(wardrop_consistent(plan, net, 1e-6));

  // human_fill output is consistent by construction
  std::vector<double> residual = {
      residual_human_capacity(net.road(0), 50.0, 0.0),
      residual_human_capacity(net.road(1), 60.0, 0.0)};
  auto [f, u] = human_fill(net, plan.ell, residual, 0.6);
  plan.flows.human_vps = f;
  CHECK(wardrop_consistent(plan, net, 1e-6));
}

TEST_CASE("profit and objective") {
  Plan plan;
  plan.ell = CongestionProfile{{50.0, 70.0}};
  plan.prices = {2.0, 0.0};
  plan.flows.auto_vps = {0.1, 0.2};
  plan.flows.human_vps = {0.0, 0.0};
  CHECK(profit(plan) == doctest::Approx(0.2));

  plan.prices = {0.0, 0.0};
  CHECK(profit(plan) == 0.0);

  PlanningProblem p = small_problem(PopulationModel::uniform(), 0.75, 0.25);
  plan.flows.human_vps = {0.75, 0.0};
  plan.flows.auto_vps = {0.0, 0.25};
  CHECK(objective_J(plan, p) == doctest::Approx(55.0));

  PlanningProblem none = small_problem(PopulationModel::uniform(), 0.0, 0.0);
  CHECK_THROWS_AS(objective_J(plan, none), ZeroDemand);
}

TEST_CASE("objective charges the unserved penalty") {
  PlanningProblem p = small_problem(PopulationModel::uniform(), 1.0, 0.0);
  Plan plan;
  plan.ell = CongestionProfile{{50.0, 60.0}};
  plan.prices = {0.0, 0.0};
  plan.flows.human_vps = {0.5, 0.0};  // half the demand unserved
  plan.flows.auto_vps = {0.0, 0.0};
  CHECK(objective_J(plan, p) == doctest::Approx((50.0 * 0.5 + 240.0 * 0.5)));
}

TEST_CASE("evaluate_menu wiring") {
  PlanningProblem p = small_problem(PopulationModel::point_mass(0.5), 0.4, 0.2);
  auto [plan, eval] = evaluate_menu(p, CongestionProfile{{50.0, 70.0}},
                                    {4.0, 1.0});
  // theta=0.5 sits left of the 20/23 indifference point: everyone rides fast
  CHECK(plan.flows.auto_vps[0] == doctest::Approx(0.2));
  CHECK(plan.flows.auto_vps[1] == doctest::Approx(0.0));
  CHECK(eval.profit == doctest::Approx(0.8));
  CHECK(eval.feasible);
  CHECK(eval.k >= 0);
  CHECK(wardrop_consistent(plan, p.network, 1e-9));

  // profit floor above the revenue ceiling: nothing is feasible
  p.profit_floor = p.price_cap * p.auto_demand_vps + 1.0;
  auto [plan2, eval2] = evaluate_menu(p, CongestionProfile{{50.0, 70.0}},
                                      {4.0, 1.0});
  CHECK_FALSE(eval2.feasible);
  CHECK_THROWS_AS(optimize(p), Infeasible);
}

TEST_CASE("evaluate_menu conserves demand") {
  Rng rng(derive_seed(20260815, 20));
  for (int trial = 0; trial < 50; ++trial) {
    PlanningProblem p = random_problem(rng, 3);
    CongestionProfile ell;
    std::vector<double> prices;
    for (int i = 0; i < 3; ++i) {
      ell.latencies_s.push_back(
          rng.uniform(p.network.free_flow_latency(i), p.latency_cap_s));
      prices.push_back(rng.uniform(0.0, p.price_cap));
    }
    auto [plan, eval] = evaluate_menu(p, ell, prices);
    double served = 0.0;
    double f_a = 0.0;
    for (int i = 0; i < 3; ++i) {
      served += plan.flows.human_vps[static_cast<std::size_t>(i)];
      f_a += plan.flows.auto_vps[static_cast<std::size_t>(i)];
    }
    CHECK(served + eval.unserved_human_vps ==
          doctest::Approx(p.human_demand_vps).epsilon(1e-12));
    CHECK(f_a == doctest::Approx(p.auto_demand_vps).epsilon(1e-12));
    CHECK(wardrop_consistent(plan, p.network, 1e-9));
  }
}

TEST_CASE("optimize on a single road") {
  PlanningProblem p;
  p.network = Network::from_roads({make_road(1000, 20)});
  p.human_demand_vps = 0.2;  // under the 20/45 human capacity
  p.auto_demand_vps = 0.0;
  p.profit_floor = 0.0;
  p.latency_grid = 5;
  p.price_grid = 5;
  p.population = PopulationModel::uniform();
  auto [plan, eval] = optimize(p);
  CHECK(plan.ell.latencies_s[0] == doctest::Approx(50.0));
  CHECK(eval.social_cost_s == doctest::Approx(50.0));
  CHECK(eval.feasible);

  auto [bplan, beval] = brute_force(p);
  CHECK(beval.social_cost_s == doctest::Approx(eval.social_cost_s));
}

TEST_CASE("optimize matches brute force on 2-road instances") {
  Rng rng(derive_seed(20260815, 21));
  for (int trial = 0; trial < 5; ++trial) {
    PlanningProblem p = random_problem(rng, 2);
    p.latency_grid = 5;
    p.price_grid = 5;
    auto [oplan, oeval] = optimize(p);
    auto [bplan, beval] = brute_force(p);
    CHECK(std::fabs(oeval.social_cost_s - beval.social_cost_s) <=
          grid_step(p) + 1e-9);
    CHECK(proposition_holds(oplan, p.network, grid_step(p) + 1e-9));
    CHECK(wardrop_consistent(oplan, p.network, 1e-9));
  }
}

TEST_CASE("brute force guards its search budget") {
  PlanningProblem p = small_problem(PopulationModel::uniform());
  p.latency_grid = 60;
  p.price_grid = 60;  // 60^4 > 1e7
  CHECK_THROWS_AS(brute_force(p), SearchSpaceTooLarge);

  PlanningProblem big = canonical_problem();
  big.network = Network::from_roads({make_road(1000, 25), make_road(1000, 20),
                                     make_road(1000, 15), make_road(1000, 10)});
  CHECK_THROWS_AS(brute_force(big), SearchSpaceTooLarge);
}

TEST_CASE("proposition predicate") {
  Network net = two_roads();  // a = (40, 50)
  Plan plan;
  plan.prices = {0.0, 0.0};
  plan.flows.auto_vps = {0.0, 0.0};

  plan.flows.human_vps = {0.0, 0.0};
  plan.ell = CongestionProfile{{90.0, 90.0}};
  CHECK(proposition_holds(plan, net, 1e-9));  // vacuous

  plan.flows.human_vps = {0.1, 0.1};
  plan.ell = CongestionProfile{{50.0, 50.0}};
  CHECK(proposition_holds(plan, net, 1e-9));  // k=1, both at a_k=50

  plan.ell = CongestionProfile{{70.0, 70.0}};
  CHECK_FALSE(proposition_holds(plan, net, 1e-9));

  // only the fast road carries humans: it must sit at its own free flow
  plan.flows.human_vps = {0.1, 0.0};
  plan.ell = CongestionProfile{{50.0, 50.0}};
  CHECK_FALSE(proposition_holds(plan, net, 1e-9));
  plan.ell = CongestionProfile{{40.0, 50.0}};
  CHECK(proposition_holds(plan, net, 1e-9));
}

TEST_CASE("prefix transform on a worked instance") {
  PlanningProblem p = small_problem(PopulationModel::point_mass(0.5), 0.5, 0.3);
  p.price_cap = 20.0;
  WeightVector w{0.5};
  auto [plan, eval] = evaluate_menu(p, CongestionProfile{{60.0, 60.0}},
                                    {1.0, 1.0});
  REQUIRE(eval.k == 1);  // both roads share the latency class

  Plan moved = prefix_transform(plan, p, w, 50.0);
  // epsilon = (0.5/0.5) * (60 - 50) = 10 on roads [k] and the duplicate
  CHECK(moved.prices[0] == doctest::Approx(11.0));
  CHECK(moved.prices[1] == doctest::Approx(11.0));
  CHECK(moved.ell.latencies_s[0] == doctest::Approx(50.0));
  CHECK(moved.ell.latencies_s[1] == doctest::Approx(50.0));
  CHECK(moved.q.q == plan.q.q);
  CHECK(profit(moved) >= profit(plan) - 1e-12);
  CHECK(objective_J(moved, p) < objective_J(plan, p) - 1e-9);
}

TEST_CASE("prefix transform error paths") {
  PlanningProblem p = small_problem(PopulationModel::point_mass(0.5), 0.5, 0.3);
  WeightVector w{0.5};
  auto [plan, eval] = evaluate_menu(p, CongestionProfile{{60.0, 60.0}},
                                    {1.0, 1.0});

  CHECK_THROWS_AS(prefix_transform(plan, p, w, 60.0), NotImprovable);
  CHECK_THROWS_AS(prefix_transform(plan, p, WeightVector{0.0}, 50.0),
                  ZeroPriceWeight);
  CHECK_THROWS_AS(prefix_transform(plan, p, w, 30.0), ValidationError);

  // bump pushes past the cap: price 8 + eps 10 > 10
  auto [pricey, eval2] = evaluate_menu(p, CongestionProfile{{60.0, 60.0}},
                                       {8.0, 8.0});
  CHECK_THROWS_AS(prefix_transform(pricey, p, w, 50.0), PriceCapExceeded);

  // plan already at free flow on road k
  auto [flat, eval3] = evaluate_menu(p, CongestionProfile{{50.0, 50.0}},
                                     {1.0, 1.0});
  REQUIRE(eval3.k == 1);
  CHECK_THROWS_AS(prefix_transform(flat, p, w, 45.0), NotImprovable);

  // heterogeneous population rejected
  PlanningProblem hetero = small_problem(PopulationModel::beta(2, 2), 0.5, 0.3);
  auto [hplan, heval] = evaluate_menu(hetero, CongestionProfile{{60.0, 60.0}},
                                      {1.0, 1.0});
  CHECK_THROWS_AS(prefix_transform(hplan, hetero, w, 50.0), ValidationError);
}
