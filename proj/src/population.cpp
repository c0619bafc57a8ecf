#include "roadplan/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/beta.hpp>

namespace roadplan {

namespace {

boost::math::beta_distribution<double> dist(double a, double b) {
  return boost::math::beta_distribution<double>(a, b);
}

}  // namespace

PopulationModel PopulationModel::beta(double alpha, double beta_param) {
  if (!(alpha > 0.0) || !(beta_param > 0.0))
    throw ValidationError("beta population: alpha and beta must be > 0");
  PopulationModel m;
  m.family_ = Family::kBeta;
  m.alpha_ = alpha;
  m.beta_ = beta_param;
  return m;
}

PopulationModel PopulationModel::empirical(std::vector<double> thetas) {
  if (thetas.empty())
    throw ValidationError("empirical population: sample set must be non-empty");
  for (double t : thetas)
    if (!(t >= 0.0 && t <= 1.0))
      throw ValidationError("empirical population: theta outside [0, 1]");
  PopulationModel m;
  m.family_ = Family::kEmpirical;
  m.thetas_ = std::move(thetas);
  return m;
}

PopulationModel PopulationModel::point_mass(double theta) {
  return empirical({theta});
}

double PopulationModel::alpha() const {
  if (!is_beta()) throw ValidationError("population: not a Beta family");
  return alpha_;
}

double PopulationModel::beta_param() const {
  if (!is_beta()) throw ValidationError("population: not a Beta family");
  return beta_;
}

const std::vector<double>& PopulationModel::samples() const {
  if (is_beta()) throw ValidationError("population: not an empirical family");
  return thetas_;
}

double PopulationModel::mean() const {
  if (is_beta()) return alpha_ / (alpha_ + beta_);
  double sum = std::accumulate(thetas_.begin(), thetas_.end(), 0.0);
  return sum / static_cast<double>(thetas_.size());
}

double PopulationModel::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  if (is_beta()) return boost::math::cdf(dist(alpha_, beta_), t);
  std::size_t count = 0;
  for (double s : thetas_)
    if (s <= t) ++count;
  return static_cast<double>(count) / static_cast<double>(thetas_.size());
}

double PopulationModel::density(double t) const {
  if (!is_beta())
    throw ValidationError("population: density undefined for sample sets");
  if (t < 0.0 || t > 1.0) return 0.0;
  return boost::math::pdf(dist(alpha_, beta_), t);
}

double PopulationModel::sample(Rng& rng) const {
  if (is_beta()) {
    double u = rng.uniform();
    return boost::math::quantile(dist(alpha_, beta_), u);
  }
  int i = rng.uniform_int(static_cast<int>(thetas_.size()));
  return thetas_[static_cast<std::size_t>(i)];
}

bool PopulationModel::operator==(const PopulationModel& other) const {
  if (family_ != other.family_) return false;
  if (is_beta()) return alpha_ == other.alpha_ && beta_ == other.beta_;
  return thetas_ == other.thetas_;
}

}  // namespace roadplan
