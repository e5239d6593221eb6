#include "cpkit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "cpkit/rng.hpp"

namespace cpkit {

namespace {

constexpr std::uint64_t kScenarioStream = 0;
constexpr double kMinFootprintM = 0.01;

void require(bool ok, const char* message) {
  if (!ok) {
    throw std::invalid_argument(message);
  }
}

void validate_range(const Range& range, const char* name) {
  if (!(std::isfinite(range.lo) && std::isfinite(range.hi) && range.lo <= range.hi)) {
    throw std::invalid_argument(std::string(name) + " must satisfy lo <= hi");
  }
}

void validate_positive_range(const Range& range, const char* name) {
  validate_range(range, name);
  if (!(range.lo > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be > 0");
  }
}

// Per-(frame, object) noise stream id; collisions require object ids to
// share their low 32 bits within one frame.
std::uint64_t noise_stream(int frame_index, std::int64_t object_id) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(frame_index)) << 32) ^
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(object_id));
}

}  // namespace

std::vector<VehicleSpec> default_vehicle_catalog() {
  return {
      VehicleSpec{Category::Car, {1.8, 1.8}, {1.5, 1.5}, {4.2, 4.2}},
      VehicleSpec{Category::Truck, {2.5, 2.5}, {3.2, 3.2}, {8.0, 8.0}},
      VehicleSpec{Category::Bus, {2.5, 2.5}, {3.1, 3.1}, {12.0, 12.0}},
      VehicleSpec{Category::Motorcycle, {0.8, 0.8}, {1.4, 1.4}, {2.2, 2.2}},
  };
}

void validate(const NoiseModel& noise) {
  require(std::isfinite(noise.sigma_right_m) && noise.sigma_right_m >= 0.0,
          "sigma_right_m must be >= 0");
  require(std::isfinite(noise.sigma_forward_m) && noise.sigma_forward_m >= 0.0,
          "sigma_forward_m must be >= 0");
  require(std::isfinite(noise.sigma_width_m) && noise.sigma_width_m >= 0.0,
          "sigma_width_m must be >= 0");
  require(std::isfinite(noise.sigma_length_m) && noise.sigma_length_m >= 0.0,
          "sigma_length_m must be >= 0");
  require(std::isfinite(noise.dropout_prob) && noise.dropout_prob >= 0.0 &&
              noise.dropout_prob <= 1.0,
          "dropout_prob must be in [0, 1]");
}

void validate(const ScenarioConfig& config) {
  require(config.n_vehicles.lo >= 1 && config.n_vehicles.lo <= config.n_vehicles.hi,
          "n_vehicles must satisfy 1 <= lo <= hi");
  validate_positive_range(config.bike_speed_mps, "bike_speed_mps");
  validate_positive_range(config.vehicle_speed_mps, "vehicle_speed_mps");
  validate_range(config.lateral_pass_distance_m, "lateral_pass_distance_m");
  require(config.lateral_pass_distance_m.lo >= 0.0, "lateral_pass_distance_m must be >= 0");
  validate_range(config.initial_gap_m, "initial_gap_m");
  require(!config.zone_limits_kmh.empty(), "zone_limits_kmh must not be empty");
  for (double limit : config.zone_limits_kmh) {
    require(std::isfinite(limit) && limit > 0.0, "zone limits must be > 0");
  }
  require(std::isfinite(config.frame_rate_hz) && config.frame_rate_hz > 0.0,
          "frame_rate_hz must be > 0");
  require(config.clip_len_frames >= 1, "clip_len_frames must be >= 1");
  require(!config.vehicle_catalog.empty(), "vehicle_catalog must not be empty");
  for (const VehicleSpec& spec : config.vehicle_catalog) {
    validate_positive_range(spec.width_m, "catalog width_m");
    validate_positive_range(spec.height_m, "catalog height_m");
    validate_positive_range(spec.length_m, "catalog length_m");
  }
  validate(config.noise);
  validate(config.intrinsics);
  validate(config.rig);
}

Scenario sample_scenario(const ScenarioConfig& config) {
  validate(config);
  StreamRng rng(config.seed, kScenarioStream);

  Scenario scenario;
  scenario.config = config;
  const int vehicle_count =
      config.n_vehicles.lo +
      static_cast<int>(rng.pick_index(
          static_cast<std::uint64_t>(config.n_vehicles.hi - config.n_vehicles.lo) + 1));
  scenario.bike_speed_mps = rng.uniform(config.bike_speed_mps.lo, config.bike_speed_mps.hi);
  scenario.zone.limit_kmh =
      config.zone_limits_kmh[rng.pick_index(config.zone_limits_kmh.size())];

  scenario.vehicles.reserve(static_cast<std::size_t>(vehicle_count));
  for (int i = 0; i < vehicle_count; ++i) {
    const VehicleSpec& spec =
        config.vehicle_catalog[rng.pick_index(config.vehicle_catalog.size())];
    VehicleTrack track;
    track.vehicle_id = i;
    track.category = spec.category;
    track.width_m = rng.uniform(spec.width_m.lo, spec.width_m.hi);
    track.height_m = rng.uniform(spec.height_m.lo, spec.height_m.hi);
    track.length_m = rng.uniform(spec.length_m.lo, spec.length_m.hi);

    const double clearance =
        rng.uniform(config.lateral_pass_distance_m.lo, config.lateral_pass_distance_m.hi);
    track.right_m = clearance + track.width_m / 2.0 + config.rig.handlebar_offset_m;

    double gap_lo = config.initial_gap_m.lo;
    double speed_lo = config.vehicle_speed_mps.lo;
    if (i == 0) {
      // The first vehicle must actually overtake: spawn at or behind the
      // bike, strictly faster than it.
      gap_lo = std::max(gap_lo, 0.0);
      if (!(config.initial_gap_m.hi >= 0.0)) {
        throw std::invalid_argument("initial_gap_m range excludes spawning behind the bike");
      }
      speed_lo = std::max(speed_lo, scenario.bike_speed_mps);
      if (!(config.vehicle_speed_mps.hi > scenario.bike_speed_mps)) {
        throw std::invalid_argument(
            "vehicle_speed_mps range excludes speeds above the bike's");
      }
    }
    track.start_forward_m = -rng.uniform(gap_lo, config.initial_gap_m.hi);
    track.speed_mps = rng.uniform(speed_lo, config.vehicle_speed_mps.hi);
    if (i == 0 && !(track.speed_mps > scenario.bike_speed_mps)) {
      track.speed_mps = std::nextafter(scenario.bike_speed_mps,
                                       std::numeric_limits<double>::infinity());
    }
    scenario.vehicles.push_back(track);
  }
  return scenario;
}

FrameLog simulate(const Scenario& scenario) {
  validate(scenario.config);
  FrameLog frames;
  frames.reserve(static_cast<std::size_t>(scenario.config.clip_len_frames));
  for (int k = 0; k < scenario.config.clip_len_frames; ++k) {
    Frame frame;
    frame.frame_index = k;
    frame.t = static_cast<double>(k) / scenario.config.frame_rate_hz;
    frame.objects.reserve(scenario.vehicles.size());
    for (const VehicleTrack& track : scenario.vehicles) {
      ObjectState state;
      state.object_id = track.vehicle_id;
      state.category = track.category;
      state.width_m = track.width_m;
      state.height_m = track.height_m;
      state.length_m = track.length_m;
      state.forward_m =
          track.start_forward_m + (track.speed_mps - scenario.bike_speed_mps) * frame.t;
      state.right_m = track.right_m;
      state.vertical_m = 0.0;
      state.yaw_rad = 0.0;
      state.t = frame.t;
      state.speed_mps = track.speed_mps;
      frame.objects.push_back(state);
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<PassingEvent> ground_truth_events(const FrameLog& frames,
                                              const CriteriaConfig& config,
                                              const SpeedZone& zone) {
  validate(config);
  validate(zone);

  struct Closest {
    double abs_forward_m = std::numeric_limits<double>::infinity();
    double t = 0.0;
    double clearance_m = 0.0;
  };
  std::map<std::int64_t, Closest> closest_by_vehicle;

  for (const Frame& frame : frames) {
    for (const ObjectState& state : frame.objects) {
      if (!longitudinal_overlap(state.forward_m, state.length_m, config.rig)) {
        continue;
      }
      Closest& closest = closest_by_vehicle
                             .try_emplace(state.object_id)
                             .first->second;
      // Strict < keeps the earliest frame on ties.
      if (std::abs(state.forward_m) < closest.abs_forward_m) {
        const double side_right_m =
            config.traffic_side == TrafficSide::LeftHand ? state.right_m : -state.right_m;
        closest.abs_forward_m = std::abs(state.forward_m);
        closest.t = frame.t;
        // A vehicle laterally overlapping the handlebar line reads as zero
        // clearance, matching what a side-range sensor would report.
        closest.clearance_m =
            std::max(passing_distance(side_right_m, state.width_m, config.rig), 0.0);
      }
    }
  }

  std::vector<PassingEvent> events;
  events.reserve(closest_by_vehicle.size());
  for (const auto& [vehicle_id, closest] : closest_by_vehicle) {
    PassingEvent event;
    event.vehicle_id = vehicle_id;
    event.capture_time_s = closest.t;
    event.lateral_distance_m = closest.clearance_m;
    event.zone = zone;
    event.is_cp = label_pass_event(closest.clearance_m, zone, config);
    events.push_back(event);
  }
  return events;
}

DetectionLog perturb(const FrameLog& frames, const NoiseModel& noise, std::uint64_t seed) {
  validate(noise);
  if (noise == NoiseModel{}) {
    return frames;
  }
  DetectionLog noisy;
  noisy.reserve(frames.size());
  for (const Frame& frame : frames) {
    Frame out;
    out.frame_index = frame.frame_index;
    out.t = frame.t;
    out.objects.reserve(frame.objects.size());
    for (const ObjectState& state : frame.objects) {
      StreamRng rng(seed, noise_stream(frame.frame_index, state.object_id));
      if (rng.bernoulli(noise.dropout_prob)) {
        continue;
      }
      ObjectState noisy_state = state;
      noisy_state.right_m = rng.normal(state.right_m, noise.sigma_right_m);
      noisy_state.forward_m = rng.normal(state.forward_m, noise.sigma_forward_m);
      noisy_state.width_m = std::max(rng.normal(state.width_m, noise.sigma_width_m),
                                     kMinFootprintM);
      noisy_state.length_m = std::max(rng.normal(state.length_m, noise.sigma_length_m),
                                      kMinFootprintM);
      out.objects.push_back(noisy_state);
    }
    noisy.push_back(std::move(out));
  }
  return noisy;
}

FrameLog truncate_fov(const FrameLog& frames, const CameraIntrinsics& intrinsics) {
  validate(intrinsics);
  FrameLog visible;
  visible.reserve(frames.size());
  for (const Frame& frame : frames) {
    Frame out;
    out.frame_index = frame.frame_index;
    out.t = frame.t;
    for (const ObjectState& state : frame.objects) {
      if (in_fov(state, intrinsics)) {
        out.objects.push_back(state);
      }
    }
    visible.push_back(std::move(out));
  }
  return visible;
}

}  // namespace cpkit
