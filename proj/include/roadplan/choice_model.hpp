#pragma once

#include <cstdint>
#include <vector>

#include "roadplan/common.hpp"
#include "roadplan/population.hpp"

namespace roadplan {

/// Linear latency/price trade-off on the simplex: omega = (1-theta, theta).
/// The deterministic choice is invariant to positive scaling of omega, so
/// the single parameter theta fixes the gauge.
struct WeightVector {
  double theta = 0.5;

  double w_latency() const { return 1.0 - theta; }
  double w_price() const { return theta; }
  void validate() const;
};

struct MenuOption {
  int road_id = 0;
  double ell_s = 0.0;
  double price = 0.0;
};

/// One option per road, index-aligned with the sorted Network.
struct Menu {
  std::vector<MenuOption> options;

  int size() const { return static_cast<int>(options.size()); }
};

struct ChoiceDistribution {
  std::vector<double> q;

  void validate() const;
};

enum class ChoiceMode { kDeterministic, kNoisy };

/// Noisy-rational (softmax) answer model; beta is the temperature in reward
/// units. Deterministic mode ignores beta.
struct ChoiceNoise {
  ChoiceMode mode = ChoiceMode::kDeterministic;
  double beta = 0.5;

  void validate() const;
};

double reward(const WeightVector& w, const MenuOption& opt);

/// Indices i for which some j offers weakly lower latency and price, strictly
/// lower in one; exact duplicates dominate the higher-indexed copy.
std::vector<int> dominated_set(const Menu& menu);

/// Reward-maximizing option; ties go to the lowest index (the fastest road,
/// given the sorted network).
int choice_argmax(const WeightVector& w, const Menu& menu);

ChoiceDistribution choice_softmax(const WeightVector& w, const Menu& menu,
                                  const ChoiceNoise& noise);

/// Maximal theta-interval on which choice_argmax is constant. Endpoints are
/// pairwise indifference points; closed flags say which interval owns a
/// shared endpoint (decided by choice_argmax there, so degenerate one-point
/// intervals can appear when three reward lines cross at once).
struct ChoiceInterval {
  double lo = 0.0;
  double hi = 1.0;
  int option = 0;
  bool closed_lo = true;
  bool closed_hi = true;
};

std::vector<ChoiceInterval> choice_intervals(const Menu& menu);

/// Table lookup; agrees with choice_argmax for every theta, endpoints
/// included.
int interval_choice(const std::vector<ChoiceInterval>& intervals, double theta);

/// Population-level choice distribution. Deterministic mode: exact interval
/// masses for Beta populations, per-sample argmax for sample sets. Noisy
/// mode: expectation of choice_softmax (1024-bin quadrature for Beta).
ChoiceDistribution aggregate_q(const PopulationModel& pop, const Menu& menu,
                               const ChoiceNoise& noise);

int sample_user_choice(const WeightVector& w, const Menu& menu,
                       const ChoiceNoise& noise, std::uint64_t seed);

}  // namespace roadplan
