#include "roadplan/preference_learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "roadplan/rng.hpp"

namespace roadplan {

namespace {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// binary entropy in bits, 0*log 0 = 0
double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double reflect_into_unit(double x) {
  // fold the real line onto [0,1] (period-2 triangle wave)
  x = std::fabs(x);
  x = std::fmod(x, 2.0);
  return x > 1.0 ? 2.0 - x : x;
}

double log_target(double theta, const PopulationModel& prior,
                  const std::vector<Observation>& observations,
                  const ChoiceNoise& noise) {
  double d = prior.density(theta);
  if (d <= 0.0) return -std::numeric_limits<double>::infinity();
  double lt = std::log(d);
  for (const Observation& obs : observations)
    lt += std::log(answer_likelihood(theta, obs.query, obs.answer, noise));
  return lt;
}

}  // namespace

double PosteriorSamples::mean() const {
  if (thetas.empty()) throw ValidationError("posterior: no samples");
  double sum = std::accumulate(thetas.begin(), thetas.end(), 0.0);
  return sum / static_cast<double>(thetas.size());
}

double answer_likelihood(double theta, const Query& query, int answer,
                         const ChoiceNoise& noise) {
  if (!(noise.beta > 0.0))
    throw ValidationError("noise.beta: must be > 0 for answer likelihood");
  if (answer != 0 && answer != 1)
    throw ValidationError("answer: must be 0 or 1");
  WeightVector w{theta};
  double r_ans = reward(w, answer == 0 ? query.a : query.b);
  double r_other = reward(w, answer == 0 ? query.b : query.a);
  return logistic((r_ans - r_other) / noise.beta);
}

PosteriorSamples mh_posterior(const std::vector<Observation>& observations,
                              const PopulationModel& prior,
                              const ChoiceNoise& noise, int steps, int burn_in,
                              double proposal_sd, std::uint64_t seed) {
  if (burn_in < 0 || steps < burn_in + 100)
    throw ValidationError("mh: need steps >= burn_in + 100");
  if (!(proposal_sd > 0.0)) throw ValidationError("mh: proposal_sd must be > 0");

  Rng rng(seed);
  double theta = prior.mean();
  double lt = log_target(theta, prior, observations, noise);
  if (!std::isfinite(lt))
    throw DegenerateObservations("mh: zero likelihood at the prior mean");

  PosteriorSamples out;
  out.chain_length = steps;
  out.burn_in = burn_in;
  out.thetas.reserve(static_cast<std::size_t>(steps - burn_in));
  int accepted = 0;
  for (int s = 0; s < steps; ++s) {
    double prop = reflect_into_unit(theta + proposal_sd * rng.normal());
    double lt_prop = log_target(prop, prior, observations, noise);
    double log_u = std::log(1.0 - rng.uniform());  // (0, 1] guards log(0)
    if (log_u < lt_prop - lt) {
      theta = prop;
      lt = lt_prop;
      ++accepted;
    }
    if (s >= burn_in) out.thetas.push_back(theta);
  }
  out.acceptance_rate = static_cast<double>(accepted) / steps;
  return out;
}

double expected_information_gain(const PosteriorSamples& posterior,
                                 const Query& query, const ChoiceNoise& noise) {
  if (posterior.thetas.empty()) throw ValidationError("posterior: no samples");
  std::size_t n = posterior.thetas.size();
  std::size_t stride = (n + 127) / 128;
  double p_bar = 0.0;
  double h_cond = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; i += stride) {
    double p = answer_likelihood(posterior.thetas[i], query, 0, noise);
    p_bar += p;
    h_cond += binary_entropy(p);
    ++used;
  }
  p_bar /= static_cast<double>(used);
  h_cond /= static_cast<double>(used);
  double ig = binary_entropy(p_bar) - h_cond;
  return ig > 0.0 ? ig : 0.0;  // clamp sampling-noise negatives
}

const Query& select_query(const PosteriorSamples& posterior,
                          const std::vector<Query>& candidates,
                          const ChoiceNoise& noise) {
  if (candidates.empty()) throw ValidationError("select_query: no candidates");
  std::size_t best = 0;
  double best_ig = expected_information_gain(posterior, candidates[0], noise);
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    double ig = expected_information_gain(posterior, candidates[c], noise);
    if (ig > best_ig) {
      best = c;
      best_ig = ig;
    }
  }
  return candidates[best];
}

PopulationModel fit_population(const std::vector<PosteriorSamples>& per_user) {
  if (per_user.empty()) throw ValidationError("fit_population: no posteriors");
  std::vector<double> pooled;
  for (const PosteriorSamples& ps : per_user)
    pooled.insert(pooled.end(), ps.thetas.begin(), ps.thetas.end());
  if (pooled.empty()) throw ValidationError("fit_population: empty posteriors");

  double n = static_cast<double>(pooled.size());
  double m = std::accumulate(pooled.begin(), pooled.end(), 0.0) / n;
  double s2 = 0.0;
  for (double t : pooled) s2 += (t - m) * (t - m);
  s2 /= n;
  if (s2 < 1e-4) s2 = 1e-4;

  double nu = m * (1.0 - m) / s2 - 1.0;
  if (nu <= 0.0) return PopulationModel::empirical(std::move(pooled));
  return PopulationModel::beta(m * nu, (1.0 - m) * nu);
}

double learning_error(const PopulationModel& model, const PopulationModel& truth,
                      const Menu& reference_menu) {
  ChoiceNoise det{ChoiceMode::kDeterministic, 1.0};
  ChoiceDistribution qm = aggregate_q(model, reference_menu, det);
  ChoiceDistribution qt = aggregate_q(truth, reference_menu, det);
  double err = 0.0;
  for (std::size_t i = 0; i < qm.q.size(); ++i)
    err = std::max(err, std::fabs(qm.q[i] - qt.q[i]));
  return err;
}

}  // namespace roadplan
