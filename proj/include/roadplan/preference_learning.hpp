#pragma once

#include <cstdint>
#include <vector>

#include "roadplan/choice_model.hpp"
#include "roadplan/common.hpp"
#include "roadplan/population.hpp"

namespace roadplan {

/// A binary comparison query: which of two ride options do you prefer?
struct Query {
  MenuOption a;
  MenuOption b;

  Menu as_menu() const { return Menu{{a, b}}; }
};

struct Observation {
  int user_id = 0;
  Query query;
  int answer = 0;  // 0 picks a, 1 picks b
};

/// Post-burn-in MH draws for a single user's theta.
struct PosteriorSamples {
  std::vector<double> thetas;
  double acceptance_rate = 0.0;
  int chain_length = 0;
  int burn_in = 0;

  double mean() const;
};

/// Softmax probability of the observed answer at a given theta.
double answer_likelihood(double theta, const Query& query, int answer,
                         const ChoiceNoise& noise);

/// Metropolis-Hastings on theta in [0,1] targeting
/// prior(theta) * prod answer_likelihood, with Gaussian proposals reflected
/// at the boundary. Deterministic given the seed.
PosteriorSamples mh_posterior(const std::vector<Observation>& observations,
                              const PopulationModel& prior,
                              const ChoiceNoise& noise, int steps, int burn_in,
                              double proposal_sd, std::uint64_t seed);

/// Mutual information (bits) between the answer to `query` and theta under
/// the posterior: H(answer) - E_theta[H(answer | theta)]. Evaluated on an
/// evenly-strided subsample of at most 128 posterior draws.
double expected_information_gain(const PosteriorSamples& posterior,
                                 const Query& query, const ChoiceNoise& noise);

/// Greedy information-gain maximizer; ties keep the earliest candidate.
const Query& select_query(const PosteriorSamples& posterior,
                          const std::vector<Query>& candidates,
                          const ChoiceNoise& noise);

/// Moment-matched Beta over the pooled per-user samples (population variance,
/// floored at 1e-4); falls back to the pooled empirical set when the moment
/// solution leaves the Beta family.
PopulationModel fit_population(const std::vector<PosteriorSamples>& per_user);

/// l-infinity gap between the two models' deterministic choice distributions
/// on a fixed probe menu.
double learning_error(const PopulationModel& model, const PopulationModel& truth,
                      const Menu& reference_menu);

}  // namespace roadplan
