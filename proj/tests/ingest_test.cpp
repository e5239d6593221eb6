#include "cpkit/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

namespace {

using namespace cpkit;
namespace fs = std::filesystem;

struct TempDir {
  fs::path path;

  TempDir() {
    static std::mt19937_64 token(std::random_device{}());
    path = fs::temp_directory_path() / ("cpkit_test_" + std::to_string(token()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  fs::path file(const std::string& name) const { return path / name; }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

ObjectState make_state(std::int64_t id, double t, double forward_m) {
  ObjectState state;
  state.object_id = id;
  state.category = Category::Car;
  state.width_m = 1.8;
  state.height_m = 1.5;
  state.length_m = 4.2;
  state.forward_m = forward_m;
  state.right_m = 1.9;
  state.vertical_m = 0.0;
  state.t = t;
  return state;
}

ClipFrameLogs sample_logs() {
  Frame f0;
  f0.frame_index = 0;
  f0.t = 0.0;
  f0.objects = {make_state(0, 0.0, -10.0), make_state(1, 0.0, -15.5)};
  Frame f1;
  f1.frame_index = 1;
  f1.t = 0.04;
  f1.objects = {make_state(0, 0.04, -9.6)};
  f1.objects[0].confidence = 0.875;
  Frame f2;
  f2.frame_index = 2;
  f2.t = 0.08;  // frame with no detections

  ClipFrameLogs logs;
  logs["clip_a"] = FrameLog{f0, f1, f2};
  Frame g0;
  g0.frame_index = 0;
  g0.t = 0.0;
  g0.objects = {make_state(7, 0.0, 3.25)};
  logs["clip_b"] = FrameLog{g0};
  return logs;
}

TEST_CASE("detection logs round-trip through disk") {
  TempDir dir;
  const fs::path path = dir.file("detections.cplog");
  const ClipFrameLogs logs = sample_logs();
  write_detections(logs, path);
  const ClipFrameLogs loaded = read_detections(path);

  // Frames that held no objects leave no trace in the log.
  ClipFrameLogs expected = logs;
  expected["clip_a"].pop_back();
  CHECK(loaded == expected);
}

TEST_CASE("detection logs start with the schema header and are byte stable") {
  TempDir dir;
  const ClipFrameLogs logs = sample_logs();
  write_detections(logs, dir.file("a.cplog"));
  write_detections(logs, dir.file("b.cplog"));
  const std::string a = read_file(dir.file("a.cplog"));
  CHECK(a == read_file(dir.file("b.cplog")));
  CHECK(a.rfind("{\"cpkit_schema\": 1}\n", 0) == 0);
  // Shortest round-trip number formatting, fixed key order.
  CHECK(a.find("{\"clip_id\":\"clip_a\",\"frame\":0,\"t\":0,\"object_id\":0,"
               "\"category\":\"car\",\"w\":1.8,\"h\":1.5,\"l\":4.2,\"d_f\":-10,"
               "\"d_r\":1.9,\"d_v\":0,\"yaw\":0}") != std::string::npos);
  CHECK(a.find("\"confidence\":0.875") != std::string::npos);
}

TEST_CASE("writers sort objects by id and keep clips ordered") {
  TempDir dir;
  Frame frame;
  frame.frame_index = 0;
  frame.t = 0.0;
  frame.objects = {make_state(5, 0.0, 1.0), make_state(2, 0.0, 2.0)};

  const fs::path path = dir.file("detections.cplog");
  {
    DetectionLogWriter writer(path);
    writer.append_clip("clip", FrameLog{frame});
  }
  const ClipFrameLogs loaded = read_detections(path);
  REQUIRE(loaded.at("clip").at(0).objects.size() == 2);
  CHECK(loaded.at("clip").at(0).objects[0].object_id == 2);
  CHECK(loaded.at("clip").at(0).objects[1].object_id == 5);

  DetectionLogWriter writer(dir.file("ordered.cplog"));
  writer.append_clip("b", FrameLog{});
  CHECK_THROWS_AS(writer.append_clip("a", FrameLog{}), std::invalid_argument);
  CHECK_THROWS_AS(writer.append_clip("b", FrameLog{}), std::invalid_argument);
  CHECK_NOTHROW(writer.append_clip("c", FrameLog{}));
}

TEST_CASE("writers reject malformed frames") {
  TempDir dir;
  Frame frame;
  frame.frame_index = 0;
  frame.t = 0.0;
  frame.objects = {make_state(1, 0.0, 1.0), make_state(1, 0.0, 2.0)};
  {
    DetectionLogWriter writer(dir.file("dup.cplog"));
    CHECK_THROWS_AS(writer.append_clip("clip", FrameLog{frame}), std::invalid_argument);
  }
  {
    // Object stamped with a different time than its frame.
    frame.objects = {make_state(1, 0.5, 1.0)};
    DetectionLogWriter writer(dir.file("time.cplog"));
    CHECK_THROWS_AS(writer.append_clip("clip", FrameLog{frame}), std::invalid_argument);
  }
  {
    Frame f0;
    f0.frame_index = 3;
    Frame f1;
    f1.frame_index = 3;  // not strictly increasing
    DetectionLogWriter writer(dir.file("frames.cplog"));
    CHECK_THROWS_AS(writer.append_clip("clip", FrameLog{f0, f1}), std::invalid_argument);
  }
  {
    DetectionLogWriter writer(dir.file("clip.cplog"));
    CHECK_THROWS_AS(writer.append_clip("", FrameLog{}), std::invalid_argument);
    CHECK_THROWS_AS(writer.append_clip("a,b", FrameLog{}), std::invalid_argument);
  }
}

TEST_CASE("an empty detection file reads as no clips") {
  TempDir dir;
  write_file(dir.file("empty.cplog"), "");
  CHECK(read_detections(dir.file("empty.cplog")).empty());
  // Header-only files are also fine.
  write_detections(ClipFrameLogs{}, dir.file("header.cplog"));
  CHECK(read_file(dir.file("header.cplog")) == "{\"cpkit_schema\": 1}\n");
  CHECK(read_detections(dir.file("header.cplog")).empty());
}

TEST_CASE("malformed detection logs fail with file and line") {
  TempDir dir;
  const std::string good =
      "{\"clip_id\":\"c\",\"frame\":0,\"t\":0,\"object_id\":0,\"category\":\"car\","
      "\"w\":1.8,\"h\":1.5,\"l\":4.2,\"d_f\":-10,\"d_r\":1.9,\"d_v\":0,\"yaw\":0}";

  const auto expect_error = [&](const std::string& content, std::size_t line,
                                const std::string& fragment) {
    const fs::path path = dir.file("bad.cplog");
    write_file(path, content);
    try {
      read_detections(path);
      FAIL("expected ParseError for: " << fragment);
    } catch (const ParseError& err) {
      CHECK(err.line() == line);
      CHECK(std::string(err.what()).find(fragment) != std::string::npos);
      CHECK(std::string(err.what()).find(path.string()) != std::string::npos);
    }
  };

  expect_error(good + "\n", 1, "schema header");
  expect_error("{\"cpkit_schema\": 2}\n" + good + "\n", 1, "cpkit_schema");
  expect_error("{\"cpkit_schema\": 1, \"extra\": true}\n" + good + "\n", 1, "schema header");
  expect_error("{\"cpkit_schema\": 1}\nnot json\n", 2, "malformed");
  expect_error("{\"cpkit_schema\": 1}\n[1,2,3]\n", 2, "object");
  expect_error("{\"cpkit_schema\": 1}\n" + good + "\n" + good + "\n", 3, "duplicate");

  std::string unknown = good;
  unknown.insert(unknown.size() - 1, ",\"speed\":12.0");
  expect_error("{\"cpkit_schema\": 1}\n" + unknown + "\n", 2, "unknown field 'speed'");

  std::string missing = good;
  missing.replace(missing.find("\"yaw\":0"), 7, "\"yaw\":0.0");
  missing.replace(missing.find(",\"d_v\":0"), 8, "");
  expect_error("{\"cpkit_schema\": 1}\n" + missing + "\n", 2, "missing field 'd_v'");

  std::string bad_category = good;
  bad_category.replace(bad_category.find("\"car\""), 5, "\"spaceship\"");
  expect_error("{\"cpkit_schema\": 1}\n" + bad_category + "\n", 2, "category");

  std::string bad_width = good;
  bad_width.replace(bad_width.find("\"w\":1.8"), 7, "\"w\":0");
  expect_error("{\"cpkit_schema\": 1}\n" + bad_width + "\n", 2, "'w' must be > 0");

  std::string bad_confidence = good;
  bad_confidence.insert(bad_confidence.size() - 1, ",\"confidence\":1.5");
  expect_error("{\"cpkit_schema\": 1}\n" + bad_confidence + "\n", 2, "confidence");

  std::string bad_frame = good;
  bad_frame.replace(bad_frame.find("\"frame\":0"), 9, "\"frame\":-1");
  expect_error("{\"cpkit_schema\": 1}\n" + bad_frame + "\n", 2, "frame");

  // Two records for the same frame must agree on its timestamp.
  std::string other = good;
  other.replace(other.find("\"object_id\":0"), 13, "\"object_id\":1");
  other.replace(other.find("\"t\":0,"), 6, "\"t\":0.5,");
  expect_error("{\"cpkit_schema\": 1}\n" + good + "\n" + other + "\n", 3, "inconsistent 't'");
}

TEST_CASE("detection and state conversions are inverses") {
  ObjectState state = make_state(4, 0.12, -3.5);
  state.confidence = 0.25;
  state.yaw_rad = 0.1;
  const DetectionRecord record = to_detection_record("clip", 3, state);
  CHECK(record.clip_id == "clip");
  CHECK(record.frame == 3);
  CHECK(record.w == state.width_m);
  CHECK(record.d_f == state.forward_m);
  CHECK(record.d_r == state.right_m);
  CHECK(record.d_v == state.vertical_m);
  CHECK(to_object_state(record) == state);
}

TEST_CASE("verdict logs round-trip sorted by clip, frame, object") {
  TempDir dir;
  const fs::path path = dir.file("verdicts.cplog");

  VerdictRecord a;
  a.clip_id = "clip_b";
  a.frame = 0;
  a.t = 0.0;
  a.object_id = 0;
  a.verdict.is_cp = true;
  a.verdict.clearance_m = 0.5;
  a.verdict.clearance_violated = true;
  a.verdict.overlapping = true;
  a.verdict.on_side = true;
  a.verdict.required_clearance_m = 1.0;
  VerdictRecord b = a;
  b.clip_id = "clip_a";
  b.frame = 2;
  b.t = 0.08;
  b.object_id = 3;
  b.verdict.is_cp = false;
  b.verdict.clearance_violated = false;
  b.verdict.clearance_m = 1.75;
  VerdictRecord c = b;
  c.object_id = 1;
  c.verdict.overlapping = false;

  // Writer sorts; read returns file order.
  write_verdicts({a, b, c}, path);
  const std::vector<VerdictRecord> loaded = read_verdicts(path);
  REQUIRE(loaded.size() == 3);
  CHECK(loaded[0] == c);
  CHECK(loaded[1] == b);
  CHECK(loaded[2] == a);

  write_verdicts({c, b, a}, dir.file("again.cplog"));
  CHECK(read_file(path) == read_file(dir.file("again.cplog")));
  CHECK(read_file(path).rfind("{\"cpkit_schema\": 1}\n", 0) == 0);
}

TEST_CASE("malformed verdict logs fail with file and line") {
  TempDir dir;
  const fs::path path = dir.file("bad.cplog");
  const std::string good =
      "{\"clip_id\":\"c\",\"frame\":0,\"t\":0,\"object_id\":0,\"is_cp\":true,"
      "\"clearance_m\":0.5,\"clearance_violated\":true,\"overlapping\":true,"
      "\"on_side\":true,\"required_clearance_m\":1}";
  write_file(path, "{\"cpkit_schema\": 1}\n" + good + "\n");
  CHECK(read_verdicts(path).size() == 1);

  std::string bad_flag = good;
  bad_flag.replace(bad_flag.find("\"is_cp\":true"), 12, "\"is_cp\":1");
  write_file(path, "{\"cpkit_schema\": 1}\n" + bad_flag + "\n");
  CHECK_THROWS_AS(read_verdicts(path), ParseError);

  std::string bad_required = good;
  bad_required.replace(bad_required.find("\"required_clearance_m\":1"), 24,
                       "\"required_clearance_m\":0");
  write_file(path, "{\"cpkit_schema\": 1}\n" + bad_required + "\n");
  CHECK_THROWS_AS(read_verdicts(path), ParseError);

  write_file(path, good + "\n");
  CHECK_THROWS_AS(read_verdicts(path), ParseError);
}

TEST_CASE("event logs round-trip through CSV") {
  TempDir dir;
  const fs::path path = dir.file("events.csv");
  EventRecord first;
  first.clip_id = "clip_a";
  first.event.vehicle_id = 0;
  first.event.capture_time_s = 1.0;
  first.event.lateral_distance_m = 0.5;
  first.event.zone = SpeedZone{50.0};
  first.event.is_cp = true;
  EventRecord second;
  second.clip_id = "clip_a";
  second.event.vehicle_id = 2;
  second.event.capture_time_s = 1.64;
  second.event.lateral_distance_m = 2.15;
  second.event.zone = SpeedZone{80.0};
  second.event.is_cp = false;

  write_events({first, second}, path);
  const std::string content = read_file(path);
  CHECK(content ==
        "clip_id,vehicle_id,capture_time_s,lateral_distance_m,speed_limit_kmh,is_cp\n"
        "clip_a,0,1,0.5,50,true\n"
        "clip_a,2,1.64,2.15,80,false\n");
  const std::vector<EventRecord> loaded = read_events(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0] == first);
  CHECK(loaded[1] == second);
}

TEST_CASE("malformed event logs fail with file and line") {
  TempDir dir;
  const fs::path path = dir.file("events.csv");
  const std::string header =
      "clip_id,vehicle_id,capture_time_s,lateral_distance_m,speed_limit_kmh,is_cp\n";

  write_file(path, "clip_a,0,1,0.5,50,true\n");  // header missing
  CHECK_THROWS_AS(read_events(path), ParseError);

  write_file(path, header + "clip_a,0,1,0.5,50\n");  // short row
  CHECK_THROWS_AS(read_events(path), ParseError);

  write_file(path, header + "clip_a,0,1,0.5,50,yes\n");  // bad bool
  try {
    read_events(path);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line() == 2);
    CHECK(std::string(err.what()).find("is_cp") != std::string::npos);
  }

  write_file(path, header + "clip_a,0,1,-0.5,50,true\n");  // negative distance
  CHECK_THROWS_AS(read_events(path), ParseError);

  write_file(path, header + "clip_a,0,1,0.5,unknown,true\n");  // events need a zone
  CHECK_THROWS_AS(read_events(path), ParseError);

  write_file(path, header);
  CHECK(read_events(path).empty());
}

TEST_CASE("pass logs round-trip and spell unknown zones out") {
  TempDir dir;
  const fs::path path = dir.file("passes.csv");
  PassLogRecord known;
  known.clip_id = "ride_01";
  known.capture_time_s = 12.48;
  known.lateral_distance_m = 0.87;
  known.speed_limit_kmh = 60.0;
  known.vehicle_category = "car";
  PassLogRecord unknown;
  unknown.clip_id = "ride_02";
  unknown.capture_time_s = 3.2;
  unknown.lateral_distance_m = 1.62;
  unknown.vehicle_category = "bus";

  write_pass_log({known, unknown}, path);
  const std::string content = read_file(path);
  CHECK(content ==
        "clip_id,capture_time_s,lateral_distance_m,speed_limit_kmh,vehicle_category\n"
        "ride_01,12.48,0.87,60,car\n"
        "ride_02,3.2,1.62,unknown,bus\n");
  const std::vector<PassLogRecord> loaded = read_pass_log(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0] == known);
  CHECK(loaded[1] == unknown);
  CHECK_FALSE(loaded[1].speed_limit_kmh.has_value());

  write_file(path, content + "ride_03,-1,0.5,50,car\n");
  CHECK_THROWS_AS(read_pass_log(path), ParseError);
}

TEST_CASE("zone maps round-trip and reject duplicate clips") {
  TempDir dir;
  const fs::path path = dir.file("zones.csv");
  ZoneMap zones;
  zones["clip_a"] = 50.0;
  zones["clip_b"] = std::nullopt;
  zones["clip_c"] = 80.0;

  write_zone_map(zones, path);
  CHECK(read_file(path) ==
        "clip_id,speed_limit_kmh\n"
        "clip_a,50\n"
        "clip_b,unknown\n"
        "clip_c,80\n");
  CHECK(read_zone_map(path) == zones);

  write_file(path, "clip_id,speed_limit_kmh\nclip_a,50\nclip_a,60\n");
  try {
    read_zone_map(path);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line() == 3);
    CHECK(std::string(err.what()).find("duplicate") != std::string::npos);
  }

  write_file(path, "clip_id,speed_limit_kmh\nclip_a,0\n");
  CHECK_THROWS_AS(read_zone_map(path), ParseError);
}

TEST_CASE("blank lines are ignored everywhere") {
  TempDir dir;
  const fs::path path = dir.file("detections.cplog");
  const std::string good =
      "{\"clip_id\":\"c\",\"frame\":0,\"t\":0,\"object_id\":0,\"category\":\"car\","
      "\"w\":1.8,\"h\":1.5,\"l\":4.2,\"d_f\":-10,\"d_r\":1.9,\"d_v\":0,\"yaw\":0}";
  write_file(path, "\n{\"cpkit_schema\": 1}\n\n  \n" + good + "\n\n");
  const ClipFrameLogs loaded = read_detections(path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded.at("c").size() == 1);

  const fs::path csv = dir.file("zones.csv");
  write_file(csv, "\nclip_id,speed_limit_kmh\n\nclip_a,50\n\n");
  CHECK(read_zone_map(csv).size() == 1);
}

TEST_CASE("missing files raise a readable error") {
  TempDir dir;
  CHECK_THROWS_AS(read_detections(dir.file("nope.cplog")), std::runtime_error);
  CHECK_THROWS_AS(read_zone_map(dir.file("nope.csv")), std::runtime_error);
}

}  // namespace
