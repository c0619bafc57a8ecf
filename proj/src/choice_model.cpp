#include "roadplan/choice_model.hpp"

#include <algorithm>
#include <cmath>

#include "roadplan/rng.hpp"

namespace roadplan {

void WeightVector::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ValidationError("theta: must lie in [0, 1]");
}

void ChoiceDistribution::validate() const {
  double sum = 0.0;
  for (double v : q) {
    if (v < -kTolerance) throw ValidationError("q: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kTolerance)
    throw ValidationError("q: entries must sum to 1");
}

void ChoiceNoise::validate() const {
  if (mode == ChoiceMode::kNoisy && !(beta > 0.0))
    throw ValidationError("noise.beta: must be > 0 in noisy mode");
}

double reward(const WeightVector& w, const MenuOption& opt) {
  return -w.w_latency() * opt.ell_s - w.w_price() * opt.price;
}

std::vector<int> dominated_set(const Menu& menu) {
  std::vector<int> out;
  int n = menu.size();
  for (int i = 0; i < n; ++i) {
    const MenuOption& oi = menu.options[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const MenuOption& oj = menu.options[static_cast<std::size_t>(j)];
      if (oj.ell_s > oi.ell_s || oj.price > oi.price) continue;
      bool strict = oj.ell_s < oi.ell_s || oj.price < oi.price;
      if (strict || j < i) {  // exact duplicate: lower index dominates
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

int choice_argmax(const WeightVector& w, const Menu& menu) {
  if (menu.size() == 0) throw ValidationError("menu: empty");
  int best = 0;
  double best_r = reward(w, menu.options[0]);
  for (int i = 1; i < menu.size(); ++i) {
    double r = reward(w, menu.options[static_cast<std::size_t>(i)]);
    if (r > best_r) {
      best = i;
      best_r = r;
    }
  }
  return best;
}

ChoiceDistribution choice_softmax(const WeightVector& w, const Menu& menu,
                                  const ChoiceNoise& noise) {
  if (menu.size() == 0) throw ValidationError("menu: empty");
  if (!(noise.beta > 0.0))
    throw ValidationError("noise.beta: must be > 0 for softmax");
  std::vector<double> r(static_cast<std::size_t>(menu.size()));
  for (int i = 0; i < menu.size(); ++i)
    r[static_cast<std::size_t>(i)] =
        reward(w, menu.options[static_cast<std::size_t>(i)]);
  double rmax = *std::max_element(r.begin(), r.end());
  ChoiceDistribution dist;
  dist.q.resize(r.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    dist.q[i] = std::exp((r[i] - rmax) / noise.beta);
    sum += dist.q[i];
  }
  for (double& v : dist.q) v /= sum;
  return dist;
}

std::vector<ChoiceInterval> choice_intervals(const Menu& menu) {
  if (menu.size() == 0) throw ValidationError("menu: empty");
  // Pairwise indifference points: (1-t)(ell_j - ell_i) = t(p_i - p_j).
  std::vector<double> cuts = {0.0, 1.0};
  int n = menu.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double dl = menu.options[static_cast<std::size_t>(j)].ell_s -
                  menu.options[static_cast<std::size_t>(i)].ell_s;
      double dp = menu.options[static_cast<std::size_t>(i)].price -
                  menu.options[static_cast<std::size_t>(j)].price;
      double denom = dl + dp;
      if (denom == 0.0) continue;  // parallel reward lines
      double t = dl / denom;
      if (t > 0.0 && t < 1.0) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             cuts.end());
  cuts.back() = 1.0;

  // Winner on each elementary open interval (constant there: rewards are
  // lines in theta, and every crossing that changes the winner is a cut).
  std::vector<ChoiceInterval> merged;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    double mid = 0.5 * (cuts[s] + cuts[s + 1]);
    int win = choice_argmax(WeightVector{mid}, menu);
    if (!merged.empty() && merged.back().option == win) {
      merged.back().hi = cuts[s + 1];
    } else {
      merged.push_back({cuts[s], cuts[s + 1], win, false, false});
    }
  }

  // Hand each boundary point to the interval whose winner matches
  // choice_argmax there; a point owned by neither neighbour (several reward
  // lines crossing at once) becomes a one-point interval.
  std::vector<ChoiceInterval> out;
  out.reserve(merged.size() + 2);
  for (std::size_t s = 0; s < merged.size(); ++s) {
    ChoiceInterval cur = merged[s];
    if (s == 0) {
      int at_lo = choice_argmax(WeightVector{cur.lo}, menu);
      cur.closed_lo = (at_lo == cur.option);
      if (!cur.closed_lo) out.push_back({cur.lo, cur.lo, at_lo, true, true});
    }
    int at_hi = choice_argmax(WeightVector{cur.hi}, menu);
    cur.closed_hi = (at_hi == cur.option);
    out.push_back(cur);
    if (!cur.closed_hi) {
      if (s + 1 < merged.size() && merged[s + 1].option == at_hi)
        merged[s + 1].closed_lo = true;
      else
        out.push_back({cur.hi, cur.hi, at_hi, true, true});
    }
  }
  return out;
}

int interval_choice(const std::vector<ChoiceInterval>& intervals, double theta) {
  for (const ChoiceInterval& iv : intervals) {
    if (theta > iv.lo && theta < iv.hi) return iv.option;
    if (theta == iv.lo && iv.closed_lo) return iv.option;
    if (theta == iv.hi && iv.closed_hi) return iv.option;
  }
  throw ValidationError("interval_choice: theta outside [0, 1]");
}

namespace {

ChoiceDistribution aggregate_deterministic(const PopulationModel& pop,
                                           const Menu& menu) {
  ChoiceDistribution dist;
  dist.q.assign(static_cast<std::size_t>(menu.size()), 0.0);
  if (pop.family() == PopulationModel::Family::kEmpirical) {
    const std::vector<double>& thetas = pop.samples();
    double w = 1.0 / static_cast<double>(thetas.size());
    for (double t : thetas)
      dist.q[static_cast<std::size_t>(choice_argmax(WeightVector{t}, menu))] += w;
    return dist;
  }
  for (const ChoiceInterval& iv : choice_intervals(menu))
    dist.q[static_cast<std::size_t>(iv.option)] += pop.cdf(iv.hi) - pop.cdf(iv.lo);
  // Interval masses telescope to 1 up to rounding; renormalize the dust.
  double sum = 0.0;
  for (double v : dist.q) sum += v;
  for (double& v : dist.q) v /= sum;
  return dist;
}

ChoiceDistribution aggregate_noisy(const PopulationModel& pop, const Menu& menu,
                                   const ChoiceNoise& noise) {
  ChoiceDistribution dist;
  dist.q.assign(static_cast<std::size_t>(menu.size()), 0.0);
  auto add = [&](double theta, double weight) {
    ChoiceDistribution row = choice_softmax(WeightVector{theta}, menu, noise);
    for (std::size_t i = 0; i < dist.q.size(); ++i)
      dist.q[i] += weight * row.q[i];
  };
  if (pop.family() == PopulationModel::Family::kEmpirical) {
    const std::vector<double>& thetas = pop.samples();
    double w = 1.0 / static_cast<double>(thetas.size());
    for (double t : thetas) add(t, w);
  } else {
    constexpr int kBins = 1024;
    for (int b = 0; b < kBins; ++b) {
      double lo = static_cast<double>(b) / kBins;
      double hi = static_cast<double>(b + 1) / kBins;
      double w = pop.cdf(hi) - pop.cdf(lo);
      if (w > 0.0) add(0.5 * (lo + hi), w);
    }
  }
  double sum = 0.0;
  for (double v : dist.q) sum += v;
  for (double& v : dist.q) v /= sum;
  return dist;
}

}  // namespace

ChoiceDistribution aggregate_q(const PopulationModel& pop, const Menu& menu,
                               const ChoiceNoise& noise) {
  ChoiceDistribution dist = noise.mode == ChoiceMode::kDeterministic
                                ? aggregate_deterministic(pop, menu)
                                : aggregate_noisy(pop, menu, noise);
  dist.validate();
  return dist;
}

int sample_user_choice(const WeightVector& w, const Menu& menu,
                       const ChoiceNoise& noise, std::uint64_t seed) {
  if (noise.mode == ChoiceMode::kDeterministic) return choice_argmax(w, menu);
  ChoiceDistribution dist = choice_softmax(w, menu, noise);
  Rng rng(seed);
  double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i < menu.size(); ++i) {
    acc += dist.q[static_cast<std::size_t>(i)];
    if (u < acc) return i;
  }
  return menu.size() - 1;
}

}  // namespace roadplan
