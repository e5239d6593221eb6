#include "cpkit/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace cpkit {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
  throw std::runtime_error(origin + ": " + message);
}

void reject_unknown_keys(const std::string& origin, const ordered_json& object,
                         const std::string& section,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      fail(origin, "unknown key '" + section + item.key() + "'");
    }
  }
}

const ordered_json* find(const ordered_json& object, const char* key) {
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

double as_double(const std::string& origin, const ordered_json& value,
                 const std::string& where) {
  if (!value.is_number()) {
    fail(origin, "'" + where + "' must be a number");
  }
  return value.get<double>();
}

void load_double(const std::string& origin, const ordered_json& object, const char* key,
                 const std::string& section, double& out) {
  if (const ordered_json* value = find(object, key)) {
    out = as_double(origin, *value, section + key);
  }
}

void load_int(const std::string& origin, const ordered_json& object, const char* key,
              const std::string& section, int& out) {
  if (const ordered_json* value = find(object, key)) {
    if (!value->is_number_integer()) {
      fail(origin, "'" + section + key + "' must be an integer");
    }
    out = value->get<int>();
  }
}

void load_range(const std::string& origin, const ordered_json& object, const char* key,
                const std::string& section, Range& out) {
  const ordered_json* value = find(object, key);
  if (value == nullptr) {
    return;
  }
  if (value->is_number()) {
    const double pinned = value->get<double>();
    out = Range{pinned, pinned};
    return;
  }
  if (!value->is_array() || value->size() != 2) {
    fail(origin, "'" + section + key + "' must be a number or a [lo, hi] pair");
  }
  out.lo = as_double(origin, (*value)[0], section + key + "[0]");
  out.hi = as_double(origin, (*value)[1], section + key + "[1]");
}

void load_count_range(const std::string& origin, const ordered_json& object, const char* key,
                      const std::string& section, CountRange& out) {
  const ordered_json* value = find(object, key);
  if (value == nullptr) {
    return;
  }
  if (value->is_number_integer()) {
    const int pinned = value->get<int>();
    out = CountRange{pinned, pinned};
    return;
  }
  if (!value->is_array() || value->size() != 2 || !(*value)[0].is_number_integer() ||
      !(*value)[1].is_number_integer()) {
    fail(origin, "'" + section + key + "' must be an integer or a [lo, hi] pair");
  }
  out.lo = (*value)[0].get<int>();
  out.hi = (*value)[1].get<int>();
}

void load_noise(const std::string& origin, const ordered_json& object, NoiseModel& out) {
  reject_unknown_keys(origin, object, "scenario.noise.",
                      {"sigma_right_m", "sigma_forward_m", "sigma_width_m", "sigma_length_m",
                       "dropout_prob"});
  load_double(origin, object, "sigma_right_m", "scenario.noise.", out.sigma_right_m);
  load_double(origin, object, "sigma_forward_m", "scenario.noise.", out.sigma_forward_m);
  load_double(origin, object, "sigma_width_m", "scenario.noise.", out.sigma_width_m);
  load_double(origin, object, "sigma_length_m", "scenario.noise.", out.sigma_length_m);
  load_double(origin, object, "dropout_prob", "scenario.noise.", out.dropout_prob);
}

void load_intrinsics(const std::string& origin, const ordered_json& object,
                     CameraIntrinsics& out) {
  reject_unknown_keys(origin, object, "scenario.intrinsics.",
                      {"fx", "fy", "cx", "cy", "image_width_px", "image_height_px"});
  load_double(origin, object, "fx", "scenario.intrinsics.", out.fx);
  load_double(origin, object, "fy", "scenario.intrinsics.", out.fy);
  load_double(origin, object, "cx", "scenario.intrinsics.", out.cx);
  load_double(origin, object, "cy", "scenario.intrinsics.", out.cy);
  load_int(origin, object, "image_width_px", "scenario.intrinsics.", out.image_width_px);
  load_int(origin, object, "image_height_px", "scenario.intrinsics.", out.image_height_px);
}

void load_catalog(const std::string& origin, const ordered_json& array,
                  std::vector<VehicleSpec>& out) {
  if (!array.is_array()) {
    fail(origin, "'scenario.vehicle_catalog' must be an array");
  }
  out.clear();
  for (const ordered_json& entry : array) {
    if (!entry.is_object()) {
      fail(origin, "'scenario.vehicle_catalog' entries must be objects");
    }
    reject_unknown_keys(origin, entry, "scenario.vehicle_catalog[].",
                        {"category", "width_m", "height_m", "length_m"});
    const ordered_json* category = find(entry, "category");
    if (category == nullptr || !category->is_string()) {
      fail(origin, "'scenario.vehicle_catalog[].category' must be a string");
    }
    VehicleSpec spec;
    try {
      spec.category = category_from_string(category->get<std::string>());
    } catch (const std::invalid_argument& err) {
      fail(origin, err.what());
    }
    load_range(origin, entry, "width_m", "scenario.vehicle_catalog[].", spec.width_m);
    load_range(origin, entry, "height_m", "scenario.vehicle_catalog[].", spec.height_m);
    load_range(origin, entry, "length_m", "scenario.vehicle_catalog[].", spec.length_m);
    out.push_back(spec);
  }
}

void load_scenario(const std::string& origin, const ordered_json& object,
                   ScenarioConfig& out) {
  reject_unknown_keys(
      origin, object, "scenario.",
      {"n_vehicles", "bike_speed_mps", "vehicle_speed_mps", "lateral_pass_distance_m",
       "initial_gap_m", "zone_limits_kmh", "frame_rate_hz", "clip_len_frames",
       "vehicle_catalog", "noise", "intrinsics"});
  load_count_range(origin, object, "n_vehicles", "scenario.", out.n_vehicles);
  load_range(origin, object, "bike_speed_mps", "scenario.", out.bike_speed_mps);
  load_range(origin, object, "vehicle_speed_mps", "scenario.", out.vehicle_speed_mps);
  load_range(origin, object, "lateral_pass_distance_m", "scenario.",
             out.lateral_pass_distance_m);
  load_range(origin, object, "initial_gap_m", "scenario.", out.initial_gap_m);
  if (const ordered_json* zones = find(object, "zone_limits_kmh")) {
    if (zones->is_number()) {
      out.zone_limits_kmh = {zones->get<double>()};
    } else if (zones->is_array() && !zones->empty()) {
      out.zone_limits_kmh.clear();
      for (const ordered_json& limit : *zones) {
        out.zone_limits_kmh.push_back(
            as_double(origin, limit, "scenario.zone_limits_kmh[]"));
      }
    } else {
      fail(origin, "'scenario.zone_limits_kmh' must be a number or a non-empty array");
    }
  }
  load_double(origin, object, "frame_rate_hz", "scenario.", out.frame_rate_hz);
  load_int(origin, object, "clip_len_frames", "scenario.", out.clip_len_frames);
  if (const ordered_json* catalog = find(object, "vehicle_catalog")) {
    load_catalog(origin, *catalog, out.vehicle_catalog);
  }
  if (const ordered_json* noise = find(object, "noise")) {
    if (!noise->is_object()) {
      fail(origin, "'scenario.noise' must be an object");
    }
    load_noise(origin, *noise, out.noise);
  }
  if (const ordered_json* intrinsics = find(object, "intrinsics")) {
    if (!intrinsics->is_object()) {
      fail(origin, "'scenario.intrinsics' must be an object");
    }
    load_intrinsics(origin, *intrinsics, out.intrinsics);
  }
}

void load_criteria(const std::string& origin, const ordered_json& object,
                   CriteriaConfig& out) {
  reject_unknown_keys(origin, object, "criteria.",
                      {"rig", "traffic_side", "clearance_low_m", "clearance_high_m",
                       "zone_boundary_kmh"});
  if (const ordered_json* rig = find(object, "rig")) {
    if (!rig->is_object()) {
      fail(origin, "'criteria.rig' must be an object");
    }
    reject_unknown_keys(origin, *rig, "criteria.rig.",
                        {"handlebar_offset_m", "bike_length_m"});
    load_double(origin, *rig, "handlebar_offset_m", "criteria.rig.",
                out.rig.handlebar_offset_m);
    load_double(origin, *rig, "bike_length_m", "criteria.rig.", out.rig.bike_length_m);
  }
  if (const ordered_json* side = find(object, "traffic_side")) {
    if (!side->is_string()) {
      fail(origin, "'criteria.traffic_side' must be a string");
    }
    try {
      out.traffic_side = traffic_side_from_string(side->get<std::string>());
    } catch (const std::invalid_argument& err) {
      fail(origin, std::string("'criteria.traffic_side': ") + err.what());
    }
  }
  load_double(origin, object, "clearance_low_m", "criteria.", out.clearance_low_m);
  load_double(origin, object, "clearance_high_m", "criteria.", out.clearance_high_m);
  load_double(origin, object, "zone_boundary_kmh", "criteria.", out.zone_boundary_kmh);
}

ordered_json range_json(const Range& range) { return ordered_json::array({range.lo, range.hi}); }

ordered_json config_json(const RunConfig& config) {
  const ScenarioConfig& s = config.scenario;
  const CriteriaConfig& c = config.criteria;

  ordered_json catalog = ordered_json::array();
  for (const VehicleSpec& spec : s.vehicle_catalog) {
    catalog.push_back(ordered_json{{"category", to_string(spec.category)},
                                   {"width_m", range_json(spec.width_m)},
                                   {"height_m", range_json(spec.height_m)},
                                   {"length_m", range_json(spec.length_m)}});
  }

  return ordered_json{
      {"seed", s.seed},
      {"scenario",
       {{"n_vehicles", ordered_json::array({s.n_vehicles.lo, s.n_vehicles.hi})},
        {"bike_speed_mps", range_json(s.bike_speed_mps)},
        {"vehicle_speed_mps", range_json(s.vehicle_speed_mps)},
        {"lateral_pass_distance_m", range_json(s.lateral_pass_distance_m)},
        {"initial_gap_m", range_json(s.initial_gap_m)},
        {"zone_limits_kmh", s.zone_limits_kmh},
        {"frame_rate_hz", s.frame_rate_hz},
        {"clip_len_frames", s.clip_len_frames},
        {"vehicle_catalog", catalog},
        {"noise",
         {{"sigma_right_m", s.noise.sigma_right_m},
          {"sigma_forward_m", s.noise.sigma_forward_m},
          {"sigma_width_m", s.noise.sigma_width_m},
          {"sigma_length_m", s.noise.sigma_length_m},
          {"dropout_prob", s.noise.dropout_prob}}},
        {"intrinsics",
         {{"fx", s.intrinsics.fx},
          {"fy", s.intrinsics.fy},
          {"cx", s.intrinsics.cx},
          {"cy", s.intrinsics.cy},
          {"image_width_px", s.intrinsics.image_width_px},
          {"image_height_px", s.intrinsics.image_height_px}}}}},
      {"criteria",
       {{"rig",
         {{"handlebar_offset_m", c.rig.handlebar_offset_m},
          {"bike_length_m", c.rig.bike_length_m}}},
        {"traffic_side", to_string(c.traffic_side)},
        {"clearance_low_m", c.clearance_low_m},
        {"clearance_high_m", c.clearance_high_m},
        {"zone_boundary_kmh", c.zone_boundary_kmh}}}};
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  ordered_json root = ordered_json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    fail(origin, "not a valid structured config");
  }
  if (!root.is_object()) {
    fail(origin, "config root must be a key-value object");
  }
  reject_unknown_keys(origin, root, "", {"seed", "scenario", "criteria"});

  RunConfig config;
  if (const ordered_json* seed = find(root, "seed")) {
    if (!seed->is_number_unsigned() && !seed->is_number_integer()) {
      fail(origin, "'seed' must be a non-negative integer");
    }
    if (seed->is_number_integer() && seed->get<std::int64_t>() < 0) {
      fail(origin, "'seed' must be a non-negative integer");
    }
    config.scenario.seed = seed->get<std::uint64_t>();
  }
  if (const ordered_json* scenario = find(root, "scenario")) {
    if (!scenario->is_object()) {
      fail(origin, "'scenario' must be an object");
    }
    load_scenario(origin, *scenario, config.scenario);
  }
  if (const ordered_json* criteria = find(root, "criteria")) {
    if (!criteria->is_object()) {
      fail(origin, "'criteria' must be an object");
    }
    load_criteria(origin, *criteria, config.criteria);
  }

  // One rig for both halves: the scenario back-solves lateral positions
  // with the same geometry the criteria judge them with.
  config.scenario.rig = config.criteria.rig;

  try {
    validate(config.scenario);
    validate(config.criteria);
  } catch (const std::invalid_argument& err) {
    fail(origin, err.what());
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open config: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path.string());
}

std::string render_run_config_json(const RunConfig& config) {
  return config_json(config).dump(2) + "\n";
}

std::string render_manifest_json(const std::string& command, const RunConfig& config,
                                 std::uint64_t seed, std::int64_t count) {
  const ordered_json manifest{{"tool", kToolName},
                              {"version", kToolVersion},
                              {"command", command},
                              {"seed", seed},
                              {"count", count},
                              {"config", config_json(config)}};
  return manifest.dump(2) + "\n";
}

}  // namespace cpkit
