#pragma once

#include <cstdint>
#include <vector>

#include "cpkit/criteria.hpp"
#include "cpkit/geometry.hpp"

// Synthetic overtaking scenarios: constant-velocity vehicle tracks in the
// bicycle's frame, sampled per-frame into logs that mimic what a 3D
// detector would report, plus the matching ground-truth passing events.

namespace cpkit {

/// Closed interval; lo == hi pins the value.
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const Range&) const = default;
};

/// Inclusive integer range.
struct CountRange {
  int lo = 1;
  int hi = 1;

  bool operator==(const CountRange&) const = default;
};

struct VehicleSpec {
  Category category = Category::Car;
  Range width_m{};
  Range height_m{};
  Range length_m{};

  bool operator==(const VehicleSpec&) const = default;
};

/// Detector error model: independent zero-mean Gaussian noise per
/// (frame, object) on position and footprint, plus uniform dropout.
struct NoiseModel {
  double sigma_right_m = 0.0;
  double sigma_forward_m = 0.0;
  double sigma_width_m = 0.0;
  double sigma_length_m = 0.0;
  double dropout_prob = 0.0;

  bool operator==(const NoiseModel&) const = default;
};

void validate(const NoiseModel& noise);

/// car / truck / bus / motorcycle with fixed nominal footprints.
std::vector<VehicleSpec> default_vehicle_catalog();

struct ScenarioConfig {
  std::uint64_t seed = 0;
  CountRange n_vehicles{1, 3};
  Range bike_speed_mps{4.0, 7.0};
  Range vehicle_speed_mps{10.0, 18.0};
  Range lateral_pass_distance_m{0.3, 2.5};  // clearance, not center offset
  Range initial_gap_m{5.0, 20.0};           // spawn distance behind the bike
  std::vector<double> zone_limits_kmh{50.0, 60.0, 80.0};
  double frame_rate_hz = 25.0;
  int clip_len_frames = 50;
  std::vector<VehicleSpec> vehicle_catalog = default_vehicle_catalog();
  NoiseModel noise{};
  CameraIntrinsics intrinsics{};
  RigGeometry rig{};

  bool operator==(const ScenarioConfig&) const = default;
};

void validate(const ScenarioConfig& config);

/// Constant-velocity track in the bike frame. The lateral position is
/// constant for the whole clip; only the forward gap evolves.
struct VehicleTrack {
  std::int64_t vehicle_id = 0;
  Category category = Category::Car;
  double width_m = 0.0;
  double height_m = 0.0;
  double length_m = 0.0;
  double start_forward_m = 0.0;  // forward offset at t = 0; negative = behind
  double right_m = 0.0;          // lateral position of the box center
  double speed_mps = 0.0;        // ground speed

  bool operator==(const VehicleTrack&) const = default;
};

struct Scenario {
  ScenarioConfig config;  // echo of the fully resolved inputs
  double bike_speed_mps = 0.0;
  SpeedZone zone{};
  std::vector<VehicleTrack> vehicles;

  bool operator==(const Scenario&) const = default;
};

/// One sampling instant. Invariant: objects[i].t == t for all i.
struct Frame {
  int frame_index = 0;
  double t = 0.0;
  std::vector<ObjectState> objects;

  bool operator==(const Frame&) const = default;
};

using FrameLog = std::vector<Frame>;
using DetectionLog = FrameLog;

/// A completed or in-progress pass, summarized at the moment the vehicle
/// is closest to being abeam of the bicycle.
struct PassingEvent {
  std::int64_t vehicle_id = 0;
  double capture_time_s = 0.0;      // frame time of minimum |forward_m|
  double lateral_distance_m = 0.0;  // clearance at that frame
  SpeedZone zone{};
  bool is_cp = false;

  bool operator==(const PassingEvent&) const = default;
};

/// Draws one scenario from the configured ranges, deterministically in
/// config.seed. Vehicle 0 is always an overtaker: spawned at or behind the
/// bike and strictly faster than it. Lateral positions are back-solved from
/// the drawn clearance, so every vehicle passes on the camera's right
/// (left-hand traffic geometry).
Scenario sample_scenario(const ScenarioConfig& config);

/// Samples every track at clip_len_frames instants spaced 1/frame_rate_hz
/// apart. Noise-free; all vehicles present on every frame.
FrameLog simulate(const Scenario& scenario);

/// Ground-truth passing events of a noise-free log: one event per vehicle
/// that longitudinally overlaps the bicycle on at least one frame, labeled
/// from its clearance at the closest-to-abeam frame. Ordered by vehicle id.
std::vector<PassingEvent> ground_truth_events(const FrameLog& frames,
                                              const CriteriaConfig& config,
                                              const SpeedZone& zone);

/// Applies the noise model. Deterministic in seed and independent of
/// iteration order: each (frame, object) gets its own stream. Dropped
/// objects vanish from the frame; perturbed footprints are clamped to at
/// least 0.01 m. A zero noise model returns the input unchanged.
DetectionLog perturb(const FrameLog& frames, const NoiseModel& noise, std::uint64_t seed);

/// Removes objects whose center is behind the camera or projects outside
/// the image. Frames are kept (possibly empty); object order is preserved.
FrameLog truncate_fov(const FrameLog& frames, const CameraIntrinsics& intrinsics);

}  // namespace cpkit
