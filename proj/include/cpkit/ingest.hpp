#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpkit/criteria.hpp"
#include "cpkit/simulator.hpp"

// File formats.
//
// Detection and verdict logs are line-delimited JSON. The first line of a
// non-empty file is the schema header {"cpkit_schema": 1}; every following
// line holds one record. Writers emit records sorted by
// (clip_id, frame, object_id) with a fixed key order and shortest
// round-trip number formatting, so equal data always produces equal bytes.
//
// Event logs, pass logs, and zone maps are plain CSV with a mandatory
// header row.

namespace cpkit {

inline constexpr int kSchemaVersion = 1;

/// Malformed input. The message always carries file and line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path& path, std::size_t line, const std::string& message)
      : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One detection-log line. Field names match the file keys: w/h/l are the
/// box dimensions, d_f/d_r/d_v the camera-relative position of its center.
struct DetectionRecord {
  std::string clip_id;
  int frame = 0;
  double t = 0.0;
  std::int64_t object_id = 0;
  Category category = Category::Other;
  double w = 0.0;
  double h = 0.0;
  double l = 0.0;
  double d_f = 0.0;
  double d_r = 0.0;
  double d_v = 0.0;
  double yaw = 0.0;
  std::optional<double> confidence;

  bool operator==(const DetectionRecord&) const = default;
};

DetectionRecord to_detection_record(const std::string& clip_id, int frame_index,
                                    const ObjectState& state);
ObjectState to_object_state(const DetectionRecord& record);

/// One verdict-log line: a detection's identity plus its criteria outcome.
struct VerdictRecord {
  std::string clip_id;
  int frame = 0;
  double t = 0.0;
  std::int64_t object_id = 0;
  CpVerdict verdict{};

  bool operator==(const VerdictRecord&) const = default;
};

/// One ground-truth event-log row.
struct EventRecord {
  std::string clip_id;
  PassingEvent event{};

  bool operator==(const EventRecord&) const = default;
};

/// One row of a distance-sensor pass log: a completed pass with its
/// measured clearance. speed_limit_kmh is empty when the zone is unknown.
struct PassLogRecord {
  std::string clip_id;
  double capture_time_s = 0.0;
  double lateral_distance_m = 0.0;
  std::optional<double> speed_limit_kmh;
  std::string vehicle_category;

  bool operator==(const PassLogRecord&) const = default;
};

using ClipFrameLogs = std::map<std::string, FrameLog>;
using ZoneMap = std::map<std::string, std::optional<double>>;

/// Streams one detection log out. Clips must be appended in strictly
/// ascending clip_id order; frames sorted by index; no duplicate object ids
/// within a frame. Objects are written sorted by id.
class DetectionLogWriter {
 public:
  explicit DetectionLogWriter(const std::filesystem::path& path);
  explicit DetectionLogWriter(std::ostream& out);  // e.g. stdout

  void append_clip(const std::string& clip_id, const FrameLog& frames);

 private:
  std::string name_;
  std::ofstream file_;
  std::ostream* out_;
  std::string last_clip_id_;
  std::string buffer_;
};

/// Same contract as DetectionLogWriter, for verdict logs. Records within a
/// clip must be sorted by (frame, object_id).
class VerdictLogWriter {
 public:
  explicit VerdictLogWriter(const std::filesystem::path& path);
  explicit VerdictLogWriter(std::ostream& out);

  void append_clip(const std::string& clip_id, const std::vector<VerdictRecord>& records);

 private:
  std::string name_;
  std::ofstream file_;
  std::ostream* out_;
  std::string last_clip_id_;
  std::string buffer_;
};

/// Reads a whole detection log grouped by clip. An empty file is an empty
/// map; any non-empty file must start with the schema header. Throws
/// ParseError on malformed lines, schema violations, or duplicates.
ClipFrameLogs read_detections(const std::filesystem::path& path);
void write_detections(const ClipFrameLogs& logs, const std::filesystem::path& path);

std::vector<VerdictRecord> read_verdicts(const std::filesystem::path& path);
void write_verdicts(const std::vector<VerdictRecord>& records,
                    const std::filesystem::path& path);

std::vector<EventRecord> read_events(const std::filesystem::path& path);
void write_events(const std::vector<EventRecord>& records, const std::filesystem::path& path);

std::vector<PassLogRecord> read_pass_log(const std::filesystem::path& path);
void write_pass_log(const std::vector<PassLogRecord>& records,
                    const std::filesystem::path& path);

ZoneMap read_zone_map(const std::filesystem::path& path);
void write_zone_map(const ZoneMap& zones, const std::filesystem::path& path);

}  // namespace cpkit
