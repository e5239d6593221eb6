#pragma once

#include <optional>
#include <span>

#include "cpkit/geometry.hpp"

// Rule-based close-pass criteria. A motor vehicle's pass is a close pass
// when, on at least one frame, all three hold:
//   1. its lateral clearance is below the zone's required minimum,
//   2. it longitudinally overlaps the bicycle,
//   3. it is on the side overtakes happen on.

namespace cpkit {

struct SpeedZone {
  double limit_kmh = 60.0;

  bool operator==(const SpeedZone&) const = default;
};

void validate(const SpeedZone& zone);

struct CriteriaConfig {
  RigGeometry rig{};
  TrafficSide traffic_side = TrafficSide::LeftHand;
  double clearance_low_m = 1.0;    // required clearance at or below the boundary
  double clearance_high_m = 1.5;   // required clearance above the boundary
  double zone_boundary_kmh = 60.0;

  bool operator==(const CriteriaConfig&) const = default;
};

void validate(const CriteriaConfig& config);

/// Per-detection outcome of the three criteria. The flags are only
/// meaningful for motor vehicles; other categories get all flags false.
struct CpVerdict {
  bool is_cp = false;
  double clearance_m = 0.0;
  bool clearance_violated = false;  // clearance_m < required_clearance_m
  bool overlapping = false;
  bool on_side = false;
  double required_clearance_m = 0.0;

  bool operator==(const CpVerdict&) const = default;
};

/// Minimum legal clearance for a zone. Zones at or below the boundary get
/// the low threshold, faster zones the high one.
double required_clearance(const SpeedZone& zone, const CriteriaConfig& config);

/// Unknown zones default to the high threshold.
double required_clearance(const std::optional<SpeedZone>& zone, const CriteriaConfig& config);

CpVerdict classify_detection(const ObjectState& state, const SpeedZone& zone,
                             const CriteriaConfig& config);
CpVerdict classify_detection(const ObjectState& state, const std::optional<SpeedZone>& zone,
                             const CriteriaConfig& config);

/// Legality of a completed pass from its measured clearance alone:
/// true (close pass) iff the clearance is strictly below the requirement.
bool label_pass_event(double lateral_distance_m, const SpeedZone& zone,
                      const CriteriaConfig& config);
bool label_pass_event(double lateral_distance_m, const std::optional<SpeedZone>& zone,
                      const CriteriaConfig& config);

/// Clip-level label: true iff any per-frame verdict is a close pass.
bool scene_label(std::span<const CpVerdict> verdicts);

}  // namespace cpkit
