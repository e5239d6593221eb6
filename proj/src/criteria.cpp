#include "cpkit/criteria.hpp"

#include <cmath>
#include <stdexcept>

namespace cpkit {

void validate(const SpeedZone& zone) {
  if (!(std::isfinite(zone.limit_kmh) && zone.limit_kmh > 0.0)) {
    throw std::invalid_argument("speed zone limit must be > 0");
  }
}

void validate(const CriteriaConfig& config) {
  validate(config.rig);
  if (!(std::isfinite(config.clearance_low_m) && config.clearance_low_m > 0.0)) {
    throw std::invalid_argument("clearance_low_m must be > 0");
  }
  if (!(std::isfinite(config.clearance_high_m) &&
        config.clearance_high_m >= config.clearance_low_m)) {
    throw std::invalid_argument("clearance_high_m must be >= clearance_low_m");
  }
  if (!(std::isfinite(config.zone_boundary_kmh) && config.zone_boundary_kmh > 0.0)) {
    throw std::invalid_argument("zone_boundary_kmh must be > 0");
  }
}

double required_clearance(const SpeedZone& zone, const CriteriaConfig& config) {
  validate(zone);
  return zone.limit_kmh <= config.zone_boundary_kmh ? config.clearance_low_m
                                                    : config.clearance_high_m;
}

double required_clearance(const std::optional<SpeedZone>& zone, const CriteriaConfig& config) {
  return zone ? required_clearance(*zone, config) : config.clearance_high_m;
}

CpVerdict classify_detection(const ObjectState& state, const std::optional<SpeedZone>& zone,
                             const CriteriaConfig& config) {
  validate(state);
  // Mirror the lateral axis for right-hand traffic so the clearance formula
  // and the side test agree on which side the pass happens on.
  const double side_right_m =
      config.traffic_side == TrafficSide::LeftHand ? state.right_m : -state.right_m;

  CpVerdict verdict;
  verdict.required_clearance_m = required_clearance(zone, config);
  verdict.clearance_m = passing_distance(side_right_m, state.width_m, config.rig);
  if (!is_motor_vehicle(state.category)) {
    return verdict;
  }
  verdict.clearance_violated = verdict.clearance_m < verdict.required_clearance_m;
  verdict.overlapping = longitudinal_overlap(state.forward_m, state.length_m, config.rig);
  verdict.on_side = on_passing_side(state.right_m, config.traffic_side);
  verdict.is_cp = verdict.clearance_violated && verdict.overlapping && verdict.on_side;
  return verdict;
}

CpVerdict classify_detection(const ObjectState& state, const SpeedZone& zone,
                             const CriteriaConfig& config) {
  return classify_detection(state, std::optional<SpeedZone>(zone), config);
}

bool label_pass_event(double lateral_distance_m, const std::optional<SpeedZone>& zone,
                      const CriteriaConfig& config) {
  if (!(std::isfinite(lateral_distance_m) && lateral_distance_m >= 0.0)) {
    throw std::invalid_argument("lateral_distance_m must be >= 0");
  }
  return lateral_distance_m < required_clearance(zone, config);
}

bool label_pass_event(double lateral_distance_m, const SpeedZone& zone,
                      const CriteriaConfig& config) {
  return label_pass_event(lateral_distance_m, std::optional<SpeedZone>(zone), config);
}

bool scene_label(std::span<const CpVerdict> verdicts) {
  for (const CpVerdict& verdict : verdicts) {
    if (verdict.is_cp) {
      return true;
    }
  }
  return false;
}

}  // namespace cpkit
