#pragma once

#include <vector>

#include "roadplan/common.hpp"

namespace roadplan {

/// A single one-way road of a parallel network.
///
/// vehicle_space_m is the effective vehicle length including the minimum
/// standstill gap; the headways are the time gaps human-driven and
/// autonomous (platooning) vehicles keep behind a leader. Capacity follows
/// the headway occupancy law: at speed v a vehicle consumes
/// vehicle_space_m + headway * v meters of road.
struct Road {
  int id = 0;
  double length_m = 0.0;
  double free_speed_mps = 0.0;
  double vehicle_space_m = 0.0;
  double headway_human_s = 0.0;
  double headway_auto_s = 0.0;

  /// Travel time at free-flow speed; the lower bound on any posted latency.
  double free_flow_latency() const { return length_m / free_speed_mps; }

  void validate() const;
};

/// Parallel roads sorted ascending by free-flow latency (ties keep input
/// order); ids are reassigned to equal the sorted position.
class Network {
 public:
  static Network from_roads(std::vector<Road> roads);

  const std::vector<Road>& roads() const { return roads_; }
  const Road& road(int i) const { return roads_.at(static_cast<std::size_t>(i)); }
  int size() const { return static_cast<int>(roads_.size()); }
  double free_flow_latency(int i) const { return road(i).free_flow_latency(); }

 private:
  std::vector<Road> roads_;
};

/// Per-road posted latencies, seconds.
struct CongestionProfile {
  std::vector<double> latencies_s;

  void validate(const Network& net) const;
};

struct FlowAssignment {
  std::vector<double> human_vps;
  std::vector<double> auto_vps;
};

/// Speed that realizes a posted latency: d / ell. Throws LatencyBelowFreeFlow
/// for latencies below free flow (beyond tolerance).
double speed_at_latency(const Road& road, double latency_s);

/// Occupancy feasibility at the posted latency:
///   f_h * (L + tau_h * v) + f_a * (L + tau_a * v) <= v,  v = d / ell.
bool is_feasible(const Road& road, double latency_s, double human_vps, double auto_vps);

/// Largest total flow at a given autonomy fraction alpha = f_a / (f_h + f_a).
double max_total_flow(const Road& road, double latency_s, double autonomy_fraction);

/// Largest human flow that still fits next to a fixed autonomous flow.
/// Throws AutonomousFlowInfeasible if the autonomous flow alone exceeds
/// capacity.
double residual_human_capacity(const Road& road, double latency_s, double auto_vps);

}  // namespace roadplan
