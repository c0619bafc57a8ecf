#include "roadplan/road_network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace roadplan {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace

void Road::validate() const {
  require(std::isfinite(length_m) && length_m > 0.0, "length_m: must be > 0");
  require(std::isfinite(free_speed_mps) && free_speed_mps > 0.0,
          "free_speed_mps: must be > 0");
  require(std::isfinite(vehicle_space_m) && vehicle_space_m > 0.0,
          "vehicle_space_m: must be > 0");
  require(std::isfinite(headway_human_s) && headway_human_s > 0.0,
          "headway_human_s: must be > 0");
  require(std::isfinite(headway_auto_s) && headway_auto_s > 0.0,
          "headway_auto_s: must be > 0");
  require(headway_auto_s <= headway_human_s,
          "headway_auto_s: must be <= headway_human_s");
}

Network Network::from_roads(std::vector<Road> roads) {
  if (roads.empty()) throw ValidationError("network: needs at least one road");
  for (const Road& r : roads) r.validate();
  std::stable_sort(roads.begin(), roads.end(), [](const Road& a, const Road& b) {
    return a.free_flow_latency() < b.free_flow_latency();
  });
  for (std::size_t i = 0; i < roads.size(); ++i) roads[i].id = static_cast<int>(i);
  Network net;
  net.roads_ = std::move(roads);
  return net;
}

void CongestionProfile::validate(const Network& net) const {
  if (static_cast<int>(latencies_s.size()) != net.size())
    throw ValidationError("latencies: size mismatch with network");
  for (int i = 0; i < net.size(); ++i) {
    if (latencies_s[static_cast<std::size_t>(i)] <
        net.free_flow_latency(i) - kTolerance)
      throw LatencyBelowFreeFlow("latency below free flow on road " +
                                 std::to_string(i));
  }
}

double speed_at_latency(const Road& road, double latency_s) {
  double min_latency = road.free_flow_latency();
  if (latency_s < min_latency - kTolerance)
    throw LatencyBelowFreeFlow("latency " + std::to_string(latency_s) +
                               " below free flow " + std::to_string(min_latency));
  if (latency_s < min_latency) latency_s = min_latency;  // clamp tolerance slack
  return road.length_m / latency_s;
}

bool is_feasible(const Road& road, double latency_s, double human_vps,
                 double auto_vps) {
  double v = speed_at_latency(road, latency_s);
  double used = human_vps * (road.vehicle_space_m + road.headway_human_s * v) +
                auto_vps * (road.vehicle_space_m + road.headway_auto_s * v);
  return used <= v + kTolerance;
}

double max_total_flow(const Road& road, double latency_s,
                      double autonomy_fraction) {
  if (autonomy_fraction < 0.0 || autonomy_fraction > 1.0)
    throw ValidationError("autonomy_fraction: must lie in [0, 1]");
  double v = speed_at_latency(road, latency_s);
  double alpha = autonomy_fraction;
  double per_vehicle =
      (1.0 - alpha) * (road.vehicle_space_m + road.headway_human_s * v) +
      alpha * (road.vehicle_space_m + road.headway_auto_s * v);
  return v / per_vehicle;
}

double residual_human_capacity(const Road& road, double latency_s,
                               double auto_vps) {
  double v = speed_at_latency(road, latency_s);
  double used_auto = auto_vps * (road.vehicle_space_m + road.headway_auto_s * v);
  double slack = v - used_auto;
  if (slack < -kTolerance)
    throw AutonomousFlowInfeasible("autonomous flow alone exceeds capacity");
  if (slack < 0.0) slack = 0.0;
  return slack / (road.vehicle_space_m + road.headway_human_s * v);
}

}  // namespace roadplan
