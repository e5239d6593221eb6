#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpkit/config.hpp"
#include "cpkit/criteria.hpp"
#include "cpkit/evaluation.hpp"
#include "cpkit/ingest.hpp"
#include "cpkit/rng.hpp"
#include "cpkit/simulator.hpp"

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kNoiseSeedStream = 1;

// ---- parallel helpers ----------------------------------------------------

unsigned thread_cap() {
  if (const char* env = std::getenv("CPKIT_THREADS")) {
    unsigned threads = 0;
    const char* end = env + std::string_view(env).size();
    const auto result = std::from_chars(env, end, threads);
    if (result.ec != std::errc() || result.ptr != end || threads == 0) {
      throw std::runtime_error("CPKIT_THREADS must be a positive integer");
    }
    return threads;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(0..n-1) on up to `threads` workers. Results must be written to
// index-addressed slots so the outcome is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) {
          return;
        }
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
          return;
        }
      }
    });
  }
  for (std::thread& worker : pool) {
    worker.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

// ---- small formatting helpers ---------------------------------------------

std::string clip_name(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "clip%06lld", static_cast<long long>(index));
  return buf;
}

std::string fixed4(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

std::string zone_label(const std::optional<double>& limit) {
  if (!limit) {
    return "unknown";
  }
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), *limit);
  return std::string(buf, result.ptr);
}

std::string metric_cell(double value, bool defined) {
  return defined ? fixed4(value) : std::string("n/a");
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

ordered_json confusion_json(const cpkit::ConfusionMatrix& confusion) {
  return ordered_json{
      {"tp", confusion.tp}, {"fp", confusion.fp}, {"tn", confusion.tn}, {"fn", confusion.fn}};
}

ordered_json breakdown_json(const cpkit::ErrorBreakdown& breakdown) {
  return ordered_json{{"true_positive", breakdown.true_positive},
                      {"out_right", breakdown.out_right},
                      {"out_forward", breakdown.out_forward},
                      {"out_time", breakdown.out_time},
                      {"not_detected", breakdown.not_detected}};
}

ordered_json metric_json(double value, bool defined) {
  ordered_json metric{{"value", value}, {"defined", defined}};
  return metric;
}

// ---- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t count = 1;
};

int cmd_simulate(const SimulateArgs& args) {
  cpkit::RunConfig config;
  if (!args.config_path.empty()) {
    config = cpkit::load_run_config(args.config_path);
  }
  if (args.seed_set) {
    config.scenario.seed = args.seed;
  }
  if (args.count < 0) {
    throw std::runtime_error("--count must be >= 0");
  }
  const std::uint64_t base_seed = config.scenario.seed;

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);

  cpkit::DetectionLogWriter frames_writer(out_dir / "frames.cplog");
  cpkit::DetectionLogWriter detections_writer(out_dir / "detections.cplog");
  std::vector<cpkit::EventRecord> events;
  cpkit::ZoneMap zones;

  struct ClipOutput {
    cpkit::FrameLog frames;
    cpkit::DetectionLog detections;
    std::vector<cpkit::PassingEvent> clip_events;
    double zone_limit_kmh = 0.0;
  };

  const unsigned threads = thread_cap();
  constexpr std::int64_t kChunk = 256;
  std::int64_t close_passes = 0;
  std::vector<ClipOutput> chunk(static_cast<std::size_t>(
      std::min<std::int64_t>(kChunk, std::max<std::int64_t>(args.count, 1))));

  for (std::int64_t begin = 0; begin < args.count; begin += kChunk) {
    const std::int64_t end = std::min<std::int64_t>(begin + kChunk, args.count);
    parallel_for(static_cast<std::size_t>(end - begin), threads, [&](std::size_t offset) {
      const std::int64_t index = begin + static_cast<std::int64_t>(offset);
      cpkit::ScenarioConfig scenario_config = config.scenario;
      scenario_config.seed =
          cpkit::StreamRng::derive_seed(base_seed, static_cast<std::uint64_t>(index));
      const cpkit::Scenario scenario = cpkit::sample_scenario(scenario_config);

      ClipOutput& out = chunk[offset];
      out.frames = cpkit::simulate(scenario);
      out.clip_events = cpkit::ground_truth_events(out.frames, config.criteria, scenario.zone);
      const std::uint64_t noise_seed =
          cpkit::StreamRng::derive_seed(scenario_config.seed, kNoiseSeedStream);
      out.detections = cpkit::truncate_fov(
          cpkit::perturb(out.frames, scenario_config.noise, noise_seed),
          scenario_config.intrinsics);
      out.zone_limit_kmh = scenario.zone.limit_kmh;
    });

    for (std::int64_t index = begin; index < end; ++index) {
      ClipOutput& out = chunk[static_cast<std::size_t>(index - begin)];
      const std::string clip_id = clip_name(index);
      frames_writer.append_clip(clip_id, out.frames);
      detections_writer.append_clip(clip_id, out.detections);
      for (const cpkit::PassingEvent& event : out.clip_events) {
        close_passes += event.is_cp ? 1 : 0;
        events.push_back(cpkit::EventRecord{clip_id, event});
      }
      zones.emplace(clip_id, out.zone_limit_kmh);
      out = ClipOutput{};
    }
  }

  cpkit::write_events(events, out_dir / "events.csv");
  cpkit::write_zone_map(zones, out_dir / "zones.csv");
  write_text_file(out_dir / "manifest.json",
                  cpkit::render_manifest_json("simulate", config, base_seed, args.count));

  std::fprintf(stderr, "simulate: wrote %lld clips, %zu events (%lld close passes) to %s\n",
               static_cast<long long>(args.count), events.size(),
               static_cast<long long>(close_passes), out_dir.string().c_str());
  return 0;
}

// ---- detect -------------------------------------------------------------------

struct DetectArgs {
  std::string detections_path;
  std::string zone_map_path;
  std::string config_path;
  std::string out_path = "-";
  double handlebar_offset = -1.0;  // negative = not set
  double bike_length = -1.0;
  double clearance_low = -1.0;
  double clearance_high = -1.0;
  double zone_boundary = -1.0;
  std::string traffic_side;
};

int cmd_detect(const DetectArgs& args) {
  cpkit::CriteriaConfig criteria;
  if (!args.config_path.empty()) {
    criteria = cpkit::load_run_config(args.config_path).criteria;
  }
  if (args.handlebar_offset >= 0.0) criteria.rig.handlebar_offset_m = args.handlebar_offset;
  if (args.bike_length >= 0.0) criteria.rig.bike_length_m = args.bike_length;
  if (args.clearance_low >= 0.0) criteria.clearance_low_m = args.clearance_low;
  if (args.clearance_high >= 0.0) criteria.clearance_high_m = args.clearance_high;
  if (args.zone_boundary >= 0.0) criteria.zone_boundary_kmh = args.zone_boundary;
  if (!args.traffic_side.empty()) {
    criteria.traffic_side = cpkit::traffic_side_from_string(args.traffic_side);
  }
  cpkit::validate(criteria);

  const cpkit::ClipFrameLogs clips = cpkit::read_detections(args.detections_path);
  cpkit::ZoneMap zones;
  if (!args.zone_map_path.empty()) {
    zones = cpkit::read_zone_map(args.zone_map_path);
  } else {
    std::fprintf(stderr,
                 "detect: no zone map; treating every clip as above the zone boundary\n");
  }

  std::optional<cpkit::VerdictLogWriter> writer;
  if (args.out_path == "-") {
    writer.emplace(std::cout);
  } else {
    writer.emplace(fs::path(args.out_path));
  }

  std::int64_t records = 0;
  std::int64_t flagged = 0;
  std::vector<cpkit::VerdictRecord> clip_records;
  for (const auto& [clip_id, frames] : clips) {
    std::optional<cpkit::SpeedZone> zone;
    if (const auto it = zones.find(clip_id); it != zones.end()) {
      if (it->second) {
        zone = cpkit::SpeedZone{*it->second};
      }
    } else if (!args.zone_map_path.empty()) {
      std::fprintf(stderr,
                   "detect: clip '%s' missing from the zone map; using the above-boundary "
                   "clearance\n",
                   clip_id.c_str());
    }
    clip_records.clear();
    for (const cpkit::Frame& frame : frames) {
      for (const cpkit::ObjectState& state : frame.objects) {
        cpkit::VerdictRecord record;
        record.clip_id = clip_id;
        record.frame = frame.frame_index;
        record.t = frame.t;
        record.object_id = state.object_id;
        record.verdict = cpkit::classify_detection(state, zone, criteria);
        flagged += record.verdict.is_cp ? 1 : 0;
        ++records;
        clip_records.push_back(std::move(record));
      }
    }
    writer->append_clip(clip_id, clip_records);
  }

  std::fprintf(stderr, "detect: classified %lld detections in %zu clips (%lld flagged)\n",
               static_cast<long long>(records), clips.size(),
               static_cast<long long>(flagged));
  return 0;
}

// ---- evaluate -----------------------------------------------------------------

struct EvaluateArgs {
  std::string verdicts_path;
  std::string events_path;
  std::string universe_path;
  std::string out_path;
  double window_pre = 0.4;
  double window_post = 1.2;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const cpkit::MatchWindow window{args.window_pre, args.window_post};
  const std::vector<cpkit::VerdictRecord> verdict_records =
      cpkit::read_verdicts(args.verdicts_path);
  const std::vector<cpkit::EventRecord> events = cpkit::read_events(args.events_path);

  std::map<std::string, std::vector<cpkit::TimedVerdict>> verdicts_by_clip;
  for (const cpkit::VerdictRecord& record : verdict_records) {
    verdicts_by_clip[record.clip_id].push_back(
        cpkit::TimedVerdict{record.t, record.object_id, record.verdict});
  }
  for (auto& [clip_id, timed] : verdicts_by_clip) {
    std::stable_sort(timed.begin(), timed.end(),
                     [](const cpkit::TimedVerdict& a, const cpkit::TimedVerdict& b) {
                       return std::tie(a.t, a.object_id) < std::tie(b.t, b.object_id);
                     });
  }

  // The clip universe drives the scene-level vectors. Without an explicit
  // list it is the union of the two inputs; with one, unknown ids are errors.
  std::set<std::string> universe;
  for (const auto& [clip_id, timed] : verdicts_by_clip) {
    universe.insert(clip_id);
  }
  for (const cpkit::EventRecord& record : events) {
    universe.insert(record.clip_id);
  }
  if (!args.universe_path.empty()) {
    std::set<std::string> allowed;
    for (const auto& [clip_id, zone] : cpkit::read_zone_map(args.universe_path)) {
      allowed.insert(clip_id);
    }
    std::vector<std::string> unknown;
    for (const std::string& clip_id : universe) {
      if (allowed.count(clip_id) == 0) {
        unknown.push_back(clip_id);
      }
    }
    if (!unknown.empty()) {
      std::string message = "clip ids absent from the clip universe:";
      for (const std::string& clip_id : unknown) {
        message += " '" + clip_id + "'";
      }
      throw std::runtime_error(message);
    }
    universe = std::move(allowed);
  }

  std::map<std::string, bool> truth_by_clip;
  for (const std::string& clip_id : universe) {
    truth_by_clip[clip_id] = false;
  }
  for (const cpkit::EventRecord& record : events) {
    truth_by_clip[record.clip_id] = truth_by_clip[record.clip_id] || record.event.is_cp;
  }

  std::vector<bool> predicted;
  std::vector<bool> truth;
  std::vector<double> margins;  // how far past "legal" the clip's tightest pass reads
  predicted.reserve(universe.size());
  for (const std::string& clip_id : universe) {
    bool any_flagged = false;
    double margin = -std::numeric_limits<double>::infinity();
    if (const auto it = verdicts_by_clip.find(clip_id); it != verdicts_by_clip.end()) {
      for (const cpkit::TimedVerdict& timed : it->second) {
        any_flagged = any_flagged || timed.verdict.is_cp;
        margin = std::max(margin,
                          timed.verdict.required_clearance_m - timed.verdict.clearance_m);
      }
    }
    predicted.push_back(any_flagged);
    truth.push_back(truth_by_clip.at(clip_id));
    margins.push_back(margin);
  }

  cpkit::MetricsReport report = cpkit::scene_metrics(predicted, truth);
  try {
    report.auc = cpkit::roc_auc(margins, truth);
  } catch (const std::invalid_argument&) {
    report.auc.reset();  // single-class universe: no ranking to measure
  }

  const cpkit::EventEvaluation event_eval =
      cpkit::evaluate_events(verdicts_by_clip, events, window);
  report.error_breakdown = event_eval.breakdown;

  std::int64_t close_pass_events = 0;
  for (const cpkit::EventRecord& record : events) {
    close_pass_events += record.event.is_cp ? 1 : 0;
  }

  std::printf("clips %zu  (positive %lld, negative %lld)\n", universe.size(),
              static_cast<long long>(report.confusion.tp + report.confusion.fn),
              static_cast<long long>(report.confusion.fp + report.confusion.tn));
  std::printf("scene-level\n");
  std::printf("  accuracy   %s\n",
              metric_cell(report.accuracy, report.accuracy_defined).c_str());
  std::printf("  precision  %s\n",
              metric_cell(report.precision, report.precision_defined).c_str());
  std::printf("  recall     %s\n", metric_cell(report.recall, report.recall_defined).c_str());
  std::printf("  f1         %s\n", metric_cell(report.f1, report.f1_defined).c_str());
  std::printf("  auc        %s\n",
              report.auc ? fixed4(*report.auc).c_str() : "n/a");
  std::printf("  confusion  tp %lld  fp %lld  tn %lld  fn %lld\n",
              static_cast<long long>(report.confusion.tp),
              static_cast<long long>(report.confusion.fp),
              static_cast<long long>(report.confusion.tn),
              static_cast<long long>(report.confusion.fn));
  std::printf("events %zu  (close passes %lld)\n", events.size(),
              static_cast<long long>(close_pass_events));
  std::printf("event-level\n");
  std::printf("  accuracy   %s\n",
              metric_cell(event_eval.accuracy, event_eval.accuracy_defined).c_str());
  std::printf("  confusion  tp %lld  fp %lld  tn %lld  fn %lld\n",
              static_cast<long long>(event_eval.confusion.tp),
              static_cast<long long>(event_eval.confusion.fp),
              static_cast<long long>(event_eval.confusion.tn),
              static_cast<long long>(event_eval.confusion.fn));
  std::printf("error breakdown\n");
  std::printf("  true_positive  %lld\n",
              static_cast<long long>(event_eval.breakdown.true_positive));
  std::printf("  out_right      %lld\n", static_cast<long long>(event_eval.breakdown.out_right));
  std::printf("  out_forward    %lld\n",
              static_cast<long long>(event_eval.breakdown.out_forward));
  std::printf("  out_time       %lld\n", static_cast<long long>(event_eval.breakdown.out_time));
  std::printf("  not_detected   %lld\n",
              static_cast<long long>(event_eval.breakdown.not_detected));

  if (!args.out_path.empty()) {
    ordered_json doc{
        {"cpkit_schema", cpkit::kSchemaVersion},
        {"tool", cpkit::kToolName},
        {"version", cpkit::kToolVersion},
        {"command", "evaluate"},
        {"window", {{"pre_s", window.pre_s}, {"post_s", window.post_s}}},
        {"clips", universe.size()},
        {"scene",
         {{"accuracy", metric_json(report.accuracy, report.accuracy_defined)},
          {"precision", metric_json(report.precision, report.precision_defined)},
          {"recall", metric_json(report.recall, report.recall_defined)},
          {"f1", metric_json(report.f1, report.f1_defined)},
          {"auc", report.auc ? ordered_json(*report.auc) : ordered_json(nullptr)},
          {"confusion", confusion_json(report.confusion)}}},
        {"events",
         {{"count", events.size()},
          {"close_passes", close_pass_events},
          {"accuracy", metric_json(event_eval.accuracy, event_eval.accuracy_defined)},
          {"confusion", confusion_json(event_eval.confusion)},
          {"error_breakdown", breakdown_json(event_eval.breakdown)}}}};
    write_text_file(args.out_path, doc.dump(2) + "\n");
  }
  return 0;
}

// ---- stats -----------------------------------------------------------------------

struct StatsArgs {
  std::string pass_log_path;
  std::string config_path;
  std::string out_path;
};

int cmd_stats(const StatsArgs& args) {
  cpkit::CriteriaConfig criteria;
  if (!args.config_path.empty()) {
    criteria = cpkit::load_run_config(args.config_path).criteria;
  }
  const std::vector<cpkit::PassLogRecord> records =
      cpkit::read_pass_log(args.pass_log_path);
  const cpkit::DatasetStats stats = cpkit::dataset_stats(records, criteria);

  std::printf("%-10s %8s %10s %10s %10s %10s\n", "zone", "count", "mean_m", "stddev_m",
              "close", "legal");
  for (const cpkit::ZoneSummary& zone : stats.zones) {
    std::printf("%-10s %8lld %10s %10s %10lld %10lld\n", zone_label(zone.limit_kmh).c_str(),
                static_cast<long long>(zone.count), fixed4(zone.mean_m).c_str(),
                fixed4(zone.stddev_m).c_str(), static_cast<long long>(zone.positives),
                static_cast<long long>(zone.negatives));
  }
  for (const cpkit::ZoneSummary& zone : stats.zones) {
    std::printf("\nlateral distance histogram, zone %s\n",
                zone_label(zone.limit_kmh).c_str());
    std::int64_t max_count = 1;
    for (const std::int64_t count : zone.histogram) {
      max_count = std::max(max_count, count);
    }
    for (std::size_t bin = 0; bin < zone.histogram.size(); ++bin) {
      if (zone.histogram[bin] == 0) {
        continue;
      }
      const double lo = static_cast<double>(bin) * cpkit::DatasetStats::kBinWidthM;
      const int bar = static_cast<int>(
          (zone.histogram[bin] * 40 + max_count - 1) / max_count);
      std::printf("  [%4.1f, %4.1f)  %-40.*s %lld\n", lo,
                  lo + cpkit::DatasetStats::kBinWidthM, bar,
                  "########################################",
                  static_cast<long long>(zone.histogram[bin]));
    }
    if (zone.overflow > 0) {
      std::printf("  [ 5.0,  inf)  %lld\n", static_cast<long long>(zone.overflow));
    }
  }

  if (!args.out_path.empty()) {
    ordered_json zones = ordered_json::array();
    for (const cpkit::ZoneSummary& zone : stats.zones) {
      ordered_json entry{
          {"speed_limit_kmh",
           zone.limit_kmh ? ordered_json(*zone.limit_kmh) : ordered_json(nullptr)},
          {"count", zone.count},
          {"mean_m", zone.mean_m},
          {"stddev_m", zone.stddev_m},
          {"close_passes", zone.positives},
          {"legal_passes", zone.negatives},
          {"histogram_bin_width_m", cpkit::DatasetStats::kBinWidthM},
          {"histogram", zone.histogram},
          {"overflow", zone.overflow}};
      zones.push_back(std::move(entry));
    }
    const ordered_json doc{{"cpkit_schema", cpkit::kSchemaVersion},
                           {"tool", cpkit::kToolName},
                           {"version", cpkit::kToolVersion},
                           {"command", "stats"},
                           {"records", records.size()},
                           {"zones", zones}};
    write_text_file(args.out_path, doc.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"close-pass detection toolkit: synthetic overtaking scenarios, "
               "rule-based pass classification, and pipeline evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cpkit::kToolVersion);

  SimulateArgs simulate_args;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "generate scenario clips, detector-view logs, and ground-truth events");
  simulate->add_option("config", simulate_args.config_path,
                       "run config (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  simulate->add_option("-o,--out", simulate_args.out_dir, "output directory")->required();
  CLI::Option* seed_option =
      simulate->add_option("--seed", simulate_args.seed, "base seed (overrides the config)");
  simulate->add_option("--count", simulate_args.count, "number of clips")
      ->default_val(std::int64_t{1});

  DetectArgs detect_args;
  CLI::App* detect = app.add_subcommand(
      "detect", "apply the close-pass criteria to a detection log");
  detect->add_option("detections", detect_args.detections_path, "detection log")
      ->required()
      ->check(CLI::ExistingFile);
  detect->add_option("--zone-map", detect_args.zone_map_path,
                     "clip_id,speed_limit_kmh map; clips without one use the "
                     "above-boundary clearance")
      ->check(CLI::ExistingFile);
  detect->add_option("--config", detect_args.config_path, "run config for the criteria")
      ->check(CLI::ExistingFile);
  detect->add_option("-o,--out", detect_args.out_path, "verdict log path, '-' for stdout");
  detect->add_option("--handlebar-offset", detect_args.handlebar_offset,
                     "camera-to-handlebar-edge lateral offset, m");
  detect->add_option("--bike-length", detect_args.bike_length, "bicycle length, m");
  detect->add_option("--clearance-low", detect_args.clearance_low,
                     "required clearance at or below the zone boundary, m");
  detect->add_option("--clearance-high", detect_args.clearance_high,
                     "required clearance above the zone boundary, m");
  detect->add_option("--zone-boundary", detect_args.zone_boundary,
                     "speed limit separating the two clearance tiers, km/h");
  detect->add_option("--traffic-side", detect_args.traffic_side, "left_hand or right_hand")
      ->check(CLI::IsMember({"left_hand", "right_hand"}));

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "score a verdict log against ground-truth events");
  evaluate->add_option("--verdicts", evaluate_args.verdicts_path, "verdict log")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--events", evaluate_args.events_path, "ground-truth event log")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--clip-universe", evaluate_args.universe_path,
                       "zone map listing every clip; ids outside it are errors")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--window-pre", evaluate_args.window_pre,
                       "seconds before the capture time a match may start")
      ->default_val(0.4);
  evaluate->add_option("--window-post", evaluate_args.window_post,
                       "seconds after the capture time a match may end")
      ->default_val(1.2);
  evaluate->add_option("-o,--out", evaluate_args.out_path, "metrics report path (JSON)");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "describe a distance-sensor pass log");
  stats->add_option("pass_log", stats_args.pass_log_path, "pass log (CSV)")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--config", stats_args.config_path,
                    "run config for the labeling criteria")
      ->check(CLI::ExistingFile);
  stats->add_option("-o,--out", stats_args.out_path, "stats report path (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    if (simulate->parsed()) {
      simulate_args.seed_set = seed_option->count() > 0;
      return cmd_simulate(simulate_args);
    }
    if (detect->parsed()) {
      return cmd_detect(detect_args);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(evaluate_args);
    }
    if (stats->parsed()) {
      return cmd_stats(stats_args);
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "cpkit: error: %s\n", err.what());
    return 1;
  }
  return 0;
}
