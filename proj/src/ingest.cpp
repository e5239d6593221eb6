#include "cpkit/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>
#include <utility>

#include <json.hpp>

namespace cpkit {

namespace {

using nlohmann::json;

constexpr const char kHeaderLine[] = "{\"cpkit_schema\": 1}";
constexpr const char kEventsHeader[] =
    "clip_id,vehicle_id,capture_time_s,lateral_distance_m,speed_limit_kmh,is_cp";
constexpr const char kPassLogHeader[] =
    "clip_id,capture_time_s,lateral_distance_m,speed_limit_kmh,vehicle_category";
constexpr const char kZoneMapHeader[] = "clip_id,speed_limit_kmh";
constexpr const char kUnknownZone[] = "unknown";

// ---- number and string formatting -----------------------------------------

void append_double(std::string& out, double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, result.ptr);
}

void append_int(std::string& out, std::int64_t value) {
  char buf[24];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, result.ptr);
}

void append_json_string(std::string& out, const std::string& value) {
  out += '"';
  for (const char c : value) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

// ---- line-oriented reading --------------------------------------------------

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])) != 0) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])) != 0) --end;
  return text.substr(begin, end - begin);
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path.string());
  }
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  return out;
}

// ---- structured-record parsing ---------------------------------------------

struct LineContext {
  const std::filesystem::path& path;
  std::size_t line;
};

[[noreturn]] void fail(const LineContext& ctx, const std::string& message) {
  throw ParseError(ctx.path, ctx.line, message);
}

json parse_object(const LineContext& ctx, const std::string& line) {
  json value = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) {
    fail(ctx, "malformed record: not a valid structured line");
  }
  if (!value.is_object()) {
    fail(ctx, "record must be a key-value object");
  }
  return value;
}

void check_header(const LineContext& ctx, const std::string& line) {
  const json value = parse_object(ctx, line);
  if (!value.contains("cpkit_schema")) {
    fail(ctx, "first line must be the schema header {\"cpkit_schema\": 1}");
  }
  if (value.size() != 1) {
    fail(ctx, "schema header must contain only the cpkit_schema field");
  }
  const json& version = value.at("cpkit_schema");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kSchemaVersion) {
    fail(ctx, "unsupported cpkit_schema version (expected " +
                  std::to_string(kSchemaVersion) + ")");
  }
}

template <std::size_t N>
void reject_unknown_keys(const LineContext& ctx, const json& record,
                         const std::array<const char*, N>& allowed) {
  for (const auto& item : record.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* key) {
      return item.key() == key;
    });
    if (!known) {
      fail(ctx, "unknown field '" + item.key() + "'");
    }
  }
}

const json& require_field(const LineContext& ctx, const json& record, const char* key) {
  const auto it = record.find(key);
  if (it == record.end()) {
    fail(ctx, std::string("missing field '") + key + "'");
  }
  return *it;
}

double get_number(const LineContext& ctx, const json& record, const char* key) {
  const json& value = require_field(ctx, record, key);
  if (!value.is_number()) {
    fail(ctx, std::string("field '") + key + "' must be a number");
  }
  const double result = value.get<double>();
  if (!std::isfinite(result)) {
    fail(ctx, std::string("field '") + key + "' must be finite");
  }
  return result;
}

std::int64_t get_integer(const LineContext& ctx, const json& record, const char* key) {
  const json& value = require_field(ctx, record, key);
  if (!value.is_number_integer()) {
    fail(ctx, std::string("field '") + key + "' must be an integer");
  }
  return value.get<std::int64_t>();
}

std::string get_string(const LineContext& ctx, const json& record, const char* key) {
  const json& value = require_field(ctx, record, key);
  if (!value.is_string()) {
    fail(ctx, std::string("field '") + key + "' must be a string");
  }
  return value.get<std::string>();
}

bool get_bool(const LineContext& ctx, const json& record, const char* key) {
  const json& value = require_field(ctx, record, key);
  if (!value.is_boolean()) {
    fail(ctx, std::string("field '") + key + "' must be a boolean");
  }
  return value.get<bool>();
}

int get_frame_index(const LineContext& ctx, const json& record) {
  const std::int64_t frame = get_integer(ctx, record, "frame");
  if (frame < 0 || frame > std::numeric_limits<int>::max()) {
    fail(ctx, "field 'frame' must be a non-negative 32-bit integer");
  }
  return static_cast<int>(frame);
}

DetectionRecord parse_detection(const LineContext& ctx, const json& record) {
  static constexpr std::array<const char*, 13> kAllowed = {
      "clip_id", "frame", "t",   "object_id", "category", "w",   "h",
      "l",       "d_f",   "d_r", "d_v",       "yaw",      "confidence"};
  reject_unknown_keys(ctx, record, kAllowed);

  DetectionRecord result;
  result.clip_id = get_string(ctx, record, "clip_id");
  if (result.clip_id.empty()) {
    fail(ctx, "field 'clip_id' must not be empty");
  }
  result.frame = get_frame_index(ctx, record);
  result.t = get_number(ctx, record, "t");
  if (result.t < 0.0) {
    fail(ctx, "field 't' must be >= 0");
  }
  result.object_id = get_integer(ctx, record, "object_id");
  try {
    result.category = category_from_string(get_string(ctx, record, "category"));
  } catch (const std::invalid_argument& err) {
    fail(ctx, err.what());
  }
  result.w = get_number(ctx, record, "w");
  result.h = get_number(ctx, record, "h");
  result.l = get_number(ctx, record, "l");
  for (const auto& [name, value] :
       {std::pair<const char*, double>{"w", result.w}, {"h", result.h}, {"l", result.l}}) {
    if (!(value > 0.0)) {
      fail(ctx, std::string("field '") + name + "' must be > 0");
    }
  }
  result.d_f = get_number(ctx, record, "d_f");
  result.d_r = get_number(ctx, record, "d_r");
  result.d_v = get_number(ctx, record, "d_v");
  result.yaw = get_number(ctx, record, "yaw");
  if (record.contains("confidence")) {
    const double confidence = get_number(ctx, record, "confidence");
    if (confidence < 0.0 || confidence > 1.0) {
      fail(ctx, "field 'confidence' must be in [0, 1]");
    }
    result.confidence = confidence;
  }
  return result;
}

VerdictRecord parse_verdict(const LineContext& ctx, const json& record) {
  static constexpr std::array<const char*, 10> kAllowed = {
      "clip_id",    "frame",       "t",       "object_id", "is_cp",
      "clearance_m", "clearance_violated", "overlapping", "on_side",
      "required_clearance_m"};
  reject_unknown_keys(ctx, record, kAllowed);

  VerdictRecord result;
  result.clip_id = get_string(ctx, record, "clip_id");
  if (result.clip_id.empty()) {
    fail(ctx, "field 'clip_id' must not be empty");
  }
  result.frame = get_frame_index(ctx, record);
  result.t = get_number(ctx, record, "t");
  if (result.t < 0.0) {
    fail(ctx, "field 't' must be >= 0");
  }
  result.object_id = get_integer(ctx, record, "object_id");
  result.verdict.is_cp = get_bool(ctx, record, "is_cp");
  result.verdict.clearance_m = get_number(ctx, record, "clearance_m");
  result.verdict.clearance_violated = get_bool(ctx, record, "clearance_violated");
  result.verdict.overlapping = get_bool(ctx, record, "overlapping");
  result.verdict.on_side = get_bool(ctx, record, "on_side");
  result.verdict.required_clearance_m = get_number(ctx, record, "required_clearance_m");
  if (!(result.verdict.required_clearance_m > 0.0)) {
    fail(ctx, "field 'required_clearance_m' must be > 0");
  }
  return result;
}

// ---- line serialization ----------------------------------------------------

void append_detection_line(std::string& out, const DetectionRecord& record) {
  out += "{\"clip_id\":";
  append_json_string(out, record.clip_id);
  out += ",\"frame\":";
  append_int(out, record.frame);
  out += ",\"t\":";
  append_double(out, record.t);
  out += ",\"object_id\":";
  append_int(out, record.object_id);
  out += ",\"category\":\"";
  out += to_string(record.category);
  out += "\",\"w\":";
  append_double(out, record.w);
  out += ",\"h\":";
  append_double(out, record.h);
  out += ",\"l\":";
  append_double(out, record.l);
  out += ",\"d_f\":";
  append_double(out, record.d_f);
  out += ",\"d_r\":";
  append_double(out, record.d_r);
  out += ",\"d_v\":";
  append_double(out, record.d_v);
  out += ",\"yaw\":";
  append_double(out, record.yaw);
  if (record.confidence) {
    out += ",\"confidence\":";
    append_double(out, *record.confidence);
  }
  out += "}\n";
}

void append_verdict_line(std::string& out, const VerdictRecord& record) {
  out += "{\"clip_id\":";
  append_json_string(out, record.clip_id);
  out += ",\"frame\":";
  append_int(out, record.frame);
  out += ",\"t\":";
  append_double(out, record.t);
  out += ",\"object_id\":";
  append_int(out, record.object_id);
  out += ",\"is_cp\":";
  out += record.verdict.is_cp ? "true" : "false";
  out += ",\"clearance_m\":";
  append_double(out, record.verdict.clearance_m);
  out += ",\"clearance_violated\":";
  out += record.verdict.clearance_violated ? "true" : "false";
  out += ",\"overlapping\":";
  out += record.verdict.overlapping ? "true" : "false";
  out += ",\"on_side\":";
  out += record.verdict.on_side ? "true" : "false";
  out += ",\"required_clearance_m\":";
  append_double(out, record.verdict.required_clearance_m);
  out += "}\n";
}

// ---- CSV helpers -------------------------------------------------------------

std::vector<std::string> split_csv_row(const LineContext& ctx, const std::string& line,
                                       std::size_t expected_fields) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  if (fields.size() != expected_fields) {
    fail(ctx, "expected " + std::to_string(expected_fields) + " fields, found " +
                  std::to_string(fields.size()));
  }
  return fields;
}

double parse_csv_double(const LineContext& ctx, const std::string& field, const char* name) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || !std::isfinite(value)) {
    fail(ctx, std::string("field '") + name + "' must be a finite number, got '" + field + "'");
  }
  return value;
}

std::int64_t parse_csv_int(const LineContext& ctx, const std::string& field, const char* name) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    fail(ctx, std::string("field '") + name + "' must be an integer, got '" + field + "'");
  }
  return value;
}

bool parse_csv_bool(const LineContext& ctx, const std::string& field, const char* name) {
  if (field == "true") return true;
  if (field == "false") return false;
  fail(ctx, std::string("field '") + name + "' must be true or false, got '" + field + "'");
}

std::optional<double> parse_csv_zone(const LineContext& ctx, const std::string& field) {
  if (field == kUnknownZone) {
    return std::nullopt;
  }
  const double limit = parse_csv_double(ctx, field, "speed_limit_kmh");
  if (!(limit > 0.0)) {
    fail(ctx, "field 'speed_limit_kmh' must be > 0 or 'unknown'");
  }
  return limit;
}

void require_csv_safe(const std::string& value, const char* name) {
  if (value.empty()) {
    throw std::invalid_argument(std::string(name) + " must not be empty");
  }
  if (value.find_first_of(",\"\n\r") != std::string::npos) {
    throw std::invalid_argument(std::string(name) +
                                " must not contain commas, quotes, or line breaks");
  }
}

// Reads one CSV file: checks the exact header, then hands each non-blank
// row to the callback.
template <typename RowFn>
void read_csv(const std::filesystem::path& path, const char* expected_header, RowFn&& on_row) {
  std::ifstream in = open_for_read(path);
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      continue;
    }
    const LineContext ctx{path, line_no};
    if (!saw_header) {
      if (trim(line) != expected_header) {
        fail(ctx, std::string("missing or wrong header row (expected '") + expected_header +
                      "')");
      }
      saw_header = true;
      continue;
    }
    on_row(ctx, line);
  }
}

}  // namespace

// ---- record <-> state conversion ---------------------------------------------

DetectionRecord to_detection_record(const std::string& clip_id, int frame_index,
                                    const ObjectState& state) {
  DetectionRecord record;
  record.clip_id = clip_id;
  record.frame = frame_index;
  record.t = state.t;
  record.object_id = state.object_id;
  record.category = state.category;
  record.w = state.width_m;
  record.h = state.height_m;
  record.l = state.length_m;
  record.d_f = state.forward_m;
  record.d_r = state.right_m;
  record.d_v = state.vertical_m;
  record.yaw = state.yaw_rad;
  record.confidence = state.confidence;
  return record;
}

ObjectState to_object_state(const DetectionRecord& record) {
  ObjectState state;
  state.object_id = record.object_id;
  state.category = record.category;
  state.width_m = record.w;
  state.height_m = record.h;
  state.length_m = record.l;
  state.forward_m = record.d_f;
  state.right_m = record.d_r;
  state.vertical_m = record.d_v;
  state.yaw_rad = record.yaw;
  state.t = record.t;
  state.confidence = record.confidence;
  return state;
}

// ---- detection logs -----------------------------------------------------------

DetectionLogWriter::DetectionLogWriter(const std::filesystem::path& path)
    : name_(path.string()), file_(open_for_write(path)), out_(&file_) {
  *out_ << kHeaderLine << '\n';
}

DetectionLogWriter::DetectionLogWriter(std::ostream& out) : name_("<stream>"), out_(&out) {
  *out_ << kHeaderLine << '\n';
}

void DetectionLogWriter::append_clip(const std::string& clip_id, const FrameLog& frames) {
  require_csv_safe(clip_id, "clip_id");
  if (!last_clip_id_.empty() && !(clip_id > last_clip_id_)) {
    throw std::invalid_argument("clips must be appended in ascending clip_id order");
  }
  last_clip_id_ = clip_id;

  buffer_.clear();
  int last_frame = -1;
  std::vector<const ObjectState*> order;
  for (const Frame& frame : frames) {
    if (frame.frame_index < 0 || frame.frame_index <= last_frame) {
      throw std::invalid_argument("frames must be sorted by non-negative frame_index");
    }
    last_frame = frame.frame_index;
    order.clear();
    for (const ObjectState& state : frame.objects) {
      validate(state);
      if (state.t != frame.t) {
        throw std::invalid_argument("object t must equal its frame's t");
      }
      order.push_back(&state);
    }
    std::sort(order.begin(), order.end(), [](const ObjectState* a, const ObjectState* b) {
      return a->object_id < b->object_id;
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (order[i]->object_id == order[i - 1]->object_id) {
        throw std::invalid_argument("duplicate object_id within one frame");
      }
    }
    for (const ObjectState* state : order) {
      append_detection_line(buffer_, to_detection_record(clip_id, frame.frame_index, *state));
    }
  }
  out_->write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  if (!*out_) {
    throw std::runtime_error("write failed: " + name_);
  }
}

ClipFrameLogs read_detections(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);

  std::map<std::string, std::map<int, Frame>> clips;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      continue;
    }
    const LineContext ctx{path, line_no};
    if (!saw_header) {
      check_header(ctx, line);
      saw_header = true;
      continue;
    }
    const DetectionRecord record = parse_detection(ctx, parse_object(ctx, line));

    Frame& frame = clips[record.clip_id].try_emplace(record.frame).first->second;
    if (frame.objects.empty()) {
      frame.frame_index = record.frame;
      frame.t = record.t;
    } else if (frame.t != record.t) {
      fail(ctx, "inconsistent 't' for frame " + std::to_string(record.frame) + " of clip '" +
                    record.clip_id + "'");
    }
    for (const ObjectState& existing : frame.objects) {
      if (existing.object_id == record.object_id) {
        fail(ctx, "duplicate record for clip '" + record.clip_id + "', frame " +
                      std::to_string(record.frame) + ", object " +
                      std::to_string(record.object_id));
      }
    }
    frame.objects.push_back(to_object_state(record));
  }

  ClipFrameLogs result;
  for (auto& [clip_id, frames_by_index] : clips) {
    FrameLog log;
    log.reserve(frames_by_index.size());
    for (auto& [index, frame] : frames_by_index) {
      std::sort(frame.objects.begin(), frame.objects.end(),
                [](const ObjectState& a, const ObjectState& b) {
                  return a.object_id < b.object_id;
                });
      log.push_back(std::move(frame));
    }
    result.emplace(clip_id, std::move(log));
  }
  return result;
}

void write_detections(const ClipFrameLogs& logs, const std::filesystem::path& path) {
  DetectionLogWriter writer(path);
  for (const auto& [clip_id, frames] : logs) {
    writer.append_clip(clip_id, frames);
  }
}

// ---- verdict logs ---------------------------------------------------------------

VerdictLogWriter::VerdictLogWriter(const std::filesystem::path& path)
    : name_(path.string()), file_(open_for_write(path)), out_(&file_) {
  *out_ << kHeaderLine << '\n';
}

VerdictLogWriter::VerdictLogWriter(std::ostream& out) : name_("<stream>"), out_(&out) {
  *out_ << kHeaderLine << '\n';
}

void VerdictLogWriter::append_clip(const std::string& clip_id,
                                   const std::vector<VerdictRecord>& records) {
  require_csv_safe(clip_id, "clip_id");
  if (!last_clip_id_.empty() && !(clip_id > last_clip_id_)) {
    throw std::invalid_argument("clips must be appended in ascending clip_id order");
  }
  last_clip_id_ = clip_id;

  buffer_.clear();
  const VerdictRecord* previous = nullptr;
  for (const VerdictRecord& record : records) {
    if (record.clip_id != clip_id) {
      throw std::invalid_argument("verdict record clip_id does not match the appended clip");
    }
    if (record.frame < 0 || record.t < 0.0) {
      throw std::invalid_argument("verdict records need frame >= 0 and t >= 0");
    }
    if (previous != nullptr &&
        std::pair(record.frame, record.object_id) <=
            std::pair(previous->frame, previous->object_id)) {
      throw std::invalid_argument("verdict records must be sorted by (frame, object_id)");
    }
    previous = &record;
    append_verdict_line(buffer_, record);
  }
  out_->write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  if (!*out_) {
    throw std::runtime_error("write failed: " + name_);
  }
}

std::vector<VerdictRecord> read_verdicts(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);

  std::vector<VerdictRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      continue;
    }
    const LineContext ctx{path, line_no};
    if (!saw_header) {
      check_header(ctx, line);
      saw_header = true;
      continue;
    }
    records.push_back(parse_verdict(ctx, parse_object(ctx, line)));
  }
  return records;
}

void write_verdicts(const std::vector<VerdictRecord>& records,
                    const std::filesystem::path& path) {
  std::vector<const VerdictRecord*> order;
  order.reserve(records.size());
  for (const VerdictRecord& record : records) {
    order.push_back(&record);
  }
  std::sort(order.begin(), order.end(), [](const VerdictRecord* a, const VerdictRecord* b) {
    return std::tie(a->clip_id, a->frame, a->object_id) <
           std::tie(b->clip_id, b->frame, b->object_id);
  });

  VerdictLogWriter writer(path);
  std::vector<VerdictRecord> clip_records;
  std::size_t i = 0;
  while (i < order.size()) {
    const std::string& clip_id = order[i]->clip_id;
    clip_records.clear();
    while (i < order.size() && order[i]->clip_id == clip_id) {
      clip_records.push_back(*order[i]);
      ++i;
    }
    writer.append_clip(clip_id, clip_records);
  }
}

// ---- event logs -------------------------------------------------------------------

std::vector<EventRecord> read_events(const std::filesystem::path& path) {
  std::vector<EventRecord> records;
  read_csv(path, kEventsHeader, [&](const LineContext& ctx, const std::string& line) {
    const std::vector<std::string> fields = split_csv_row(ctx, line, 6);
    EventRecord record;
    record.clip_id = fields[0];
    if (record.clip_id.empty()) {
      fail(ctx, "field 'clip_id' must not be empty");
    }
    record.event.vehicle_id = parse_csv_int(ctx, fields[1], "vehicle_id");
    record.event.capture_time_s = parse_csv_double(ctx, fields[2], "capture_time_s");
    record.event.lateral_distance_m =
        parse_csv_double(ctx, fields[3], "lateral_distance_m");
    if (record.event.lateral_distance_m < 0.0) {
      fail(ctx, "field 'lateral_distance_m' must be >= 0");
    }
    const std::optional<double> zone = parse_csv_zone(ctx, fields[4]);
    if (!zone) {
      fail(ctx, "field 'speed_limit_kmh' must be a number in an event log");
    }
    record.event.zone.limit_kmh = *zone;
    record.event.is_cp = parse_csv_bool(ctx, fields[5], "is_cp");
    records.push_back(std::move(record));
  });
  return records;
}

void write_events(const std::vector<EventRecord>& records, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  std::string buffer(kEventsHeader);
  buffer += '\n';
  for (const EventRecord& record : records) {
    require_csv_safe(record.clip_id, "clip_id");
    if (record.event.lateral_distance_m < 0.0 || record.event.capture_time_s < 0.0) {
      throw std::invalid_argument("event records need lateral_distance_m and t >= 0");
    }
    validate(record.event.zone);
    buffer += record.clip_id;
    buffer += ',';
    append_int(buffer, record.event.vehicle_id);
    buffer += ',';
    append_double(buffer, record.event.capture_time_s);
    buffer += ',';
    append_double(buffer, record.event.lateral_distance_m);
    buffer += ',';
    append_double(buffer, record.event.zone.limit_kmh);
    buffer += ',';
    buffer += record.event.is_cp ? "true" : "false";
    buffer += '\n';
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

// ---- pass logs ---------------------------------------------------------------------

std::vector<PassLogRecord> read_pass_log(const std::filesystem::path& path) {
  std::vector<PassLogRecord> records;
  read_csv(path, kPassLogHeader, [&](const LineContext& ctx, const std::string& line) {
    const std::vector<std::string> fields = split_csv_row(ctx, line, 5);
    PassLogRecord record;
    record.clip_id = fields[0];
    if (record.clip_id.empty()) {
      fail(ctx, "field 'clip_id' must not be empty");
    }
    record.capture_time_s = parse_csv_double(ctx, fields[1], "capture_time_s");
    if (record.capture_time_s < 0.0) {
      fail(ctx, "field 'capture_time_s' must be >= 0");
    }
    record.lateral_distance_m = parse_csv_double(ctx, fields[2], "lateral_distance_m");
    if (record.lateral_distance_m < 0.0) {
      fail(ctx, "field 'lateral_distance_m' must be >= 0");
    }
    record.speed_limit_kmh = parse_csv_zone(ctx, fields[3]);
    record.vehicle_category = fields[4];
    if (record.vehicle_category.empty()) {
      fail(ctx, "field 'vehicle_category' must not be empty");
    }
    records.push_back(std::move(record));
  });
  return records;
}

void write_pass_log(const std::vector<PassLogRecord>& records,
                    const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  std::string buffer(kPassLogHeader);
  buffer += '\n';
  for (const PassLogRecord& record : records) {
    require_csv_safe(record.clip_id, "clip_id");
    require_csv_safe(record.vehicle_category, "vehicle_category");
    if (record.lateral_distance_m < 0.0 || record.capture_time_s < 0.0) {
      throw std::invalid_argument("pass-log records need lateral_distance_m and t >= 0");
    }
    if (record.speed_limit_kmh && !(*record.speed_limit_kmh > 0.0)) {
      throw std::invalid_argument("speed_limit_kmh must be > 0 when present");
    }
    buffer += record.clip_id;
    buffer += ',';
    append_double(buffer, record.capture_time_s);
    buffer += ',';
    append_double(buffer, record.lateral_distance_m);
    buffer += ',';
    if (record.speed_limit_kmh) {
      append_double(buffer, *record.speed_limit_kmh);
    } else {
      buffer += kUnknownZone;
    }
    buffer += ',';
    buffer += record.vehicle_category;
    buffer += '\n';
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

// ---- zone maps ----------------------------------------------------------------------

ZoneMap read_zone_map(const std::filesystem::path& path) {
  ZoneMap zones;
  read_csv(path, kZoneMapHeader, [&](const LineContext& ctx, const std::string& line) {
    const std::vector<std::string> fields = split_csv_row(ctx, line, 2);
    if (fields[0].empty()) {
      fail(ctx, "field 'clip_id' must not be empty");
    }
    if (zones.count(fields[0]) != 0) {
      fail(ctx, "duplicate clip_id '" + fields[0] + "'");
    }
    zones.emplace(fields[0], parse_csv_zone(ctx, fields[1]));
  });
  return zones;
}

void write_zone_map(const ZoneMap& zones, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  std::string buffer(kZoneMapHeader);
  buffer += '\n';
  for (const auto& [clip_id, limit] : zones) {
    require_csv_safe(clip_id, "clip_id");
    if (limit && !(*limit > 0.0)) {
      throw std::invalid_argument("speed_limit_kmh must be > 0 when present");
    }
    buffer += clip_id;
    buffer += ',';
    if (limit) {
      append_double(buffer, *limit);
    } else {
      buffer += kUnknownZone;
    }
    buffer += '\n';
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

}  // namespace cpkit
