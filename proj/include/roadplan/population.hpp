#pragma once

#include <vector>

#include "roadplan/common.hpp"
#include "roadplan/rng.hpp"

namespace roadplan {

/// Distribution of the preference parameter theta in [0,1] across users.
/// Either a Beta(alpha, beta) density or an empirical sample set (the
/// fallback when moment matching degenerates, and the representation of
/// point-mass / homogeneous populations).
class PopulationModel {
 public:
  enum class Family { kBeta, kEmpirical };

  static PopulationModel beta(double alpha, double beta_param);
  static PopulationModel uniform() { return beta(1.0, 1.0); }
  static PopulationModel empirical(std::vector<double> thetas);
  static PopulationModel point_mass(double theta);

  Family family() const { return family_; }
  bool is_beta() const { return family_ == Family::kBeta; }

  double alpha() const;       // Beta only
  double beta_param() const;  // Beta only
  const std::vector<double>& samples() const;  // empirical only

  double mean() const;
  /// P(theta <= t).
  double cdf(double t) const;
  /// Prior density for inference; defined for the Beta family only.
  double density(double t) const;
  double sample(Rng& rng) const;

  bool operator==(const PopulationModel& other) const;

 private:
  PopulationModel() = default;

  Family family_ = Family::kBeta;
  double alpha_ = 1.0;
  double beta_ = 1.0;
  std::vector<double> thetas_;
};

}  // namespace roadplan
