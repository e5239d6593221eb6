#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpkit/criteria.hpp"
#include "cpkit/ingest.hpp"
#include "cpkit/simulator.hpp"

// Pipeline evaluation: event-level matching of flagged passes against
// ground truth inside a time window, scene-level classification metrics,
// and descriptive statistics of pass logs.

namespace cpkit {

/// Why a ground-truth pass was or was not flagged. OutRight: the vehicle
/// was seen beside the bike but read as wide enough. OutForward: the
/// nearest detection was not longitudinally overlapping. OutTime: flagged,
/// but only outside the match window.
enum class MatchOutcome {
  TruePositive,
  OutRight,
  OutForward,
  OutTime,
  NotDetected,
};

const char* to_string(MatchOutcome outcome);

/// Open interval (t_c - pre_s, t_c + post_s) around an event's capture time.
struct MatchWindow {
  double pre_s = 0.4;
  double post_s = 1.2;

  bool operator==(const MatchWindow&) const = default;
};

/// One detection's verdict with its timestamp, the unit match_event works on.
struct TimedVerdict {
  double t = 0.0;
  std::int64_t object_id = 0;
  CpVerdict verdict{};

  bool operator==(const TimedVerdict&) const = default;
};

struct EventOutcome {
  PassingEvent event{};
  MatchOutcome outcome = MatchOutcome::NotDetected;
  std::optional<double> matched_t;  // present iff TruePositive or OutTime

  bool operator==(const EventOutcome&) const = default;
};

/// Matches one event against a clip's verdicts (sorted by t, else throws).
/// Precedence: a flagged verdict inside the window wins (TruePositive);
/// else any flagged verdict at all (OutTime); else the in-window detection
/// nearest to the capture time decides between OutRight (read as wide),
/// OutForward (not overlapping), and NotDetected.
EventOutcome match_event(std::span<const TimedVerdict> clip_verdicts,
                         const PassingEvent& event, const MatchWindow& window = {});

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct ErrorBreakdown {
  std::int64_t true_positive = 0;
  std::int64_t out_right = 0;
  std::int64_t out_forward = 0;
  std::int64_t out_time = 0;
  std::int64_t not_detected = 0;

  std::int64_t total() const {
    return true_positive + out_right + out_forward + out_time + not_detected;
  }
  bool operator==(const ErrorBreakdown&) const = default;
};

/// Metrics whose denominator can vanish carry a *_defined flag; undefined
/// values are reported as 0.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool accuracy_defined = false;
  bool precision_defined = false;
  bool recall_defined = false;
  bool f1_defined = false;
  std::optional<double> auc;
  ConfusionMatrix confusion{};
  ErrorBreakdown error_breakdown{};

  bool operator==(const MetricsReport&) const = default;
};

/// Binary classification metrics over aligned prediction/truth sequences.
MetricsReport scene_metrics(const std::vector<bool>& predicted,
                            const std::vector<bool>& truth);

/// Area under the ROC curve via the pairwise rank statistic; ties between
/// a positive and a negative score count one half. Throws on single-class
/// input.
double roc_auc(const std::vector<double>& scores, const std::vector<bool>& truth);

ErrorBreakdown error_breakdown(std::span<const EventOutcome> outcomes);

/// Event-level evaluation over every ground-truth pass: a pass counts as
/// predicted positive iff some verdict inside its window is flagged.
/// The breakdown covers only the close-pass (positive) events; outcomes
/// are reported for all of them, in input order.
struct EventEvaluation {
  std::vector<EventOutcome> outcomes;
  ConfusionMatrix confusion{};
  ErrorBreakdown breakdown{};
  double accuracy = 0.0;
  bool accuracy_defined = false;
};

EventEvaluation evaluate_events(
    const std::map<std::string, std::vector<TimedVerdict>>& verdicts_by_clip,
    const std::vector<EventRecord>& events, const MatchWindow& window = {});

/// Per-zone description of a pass log. The histogram covers [0, 5) m in
/// 0.1 m bins; wider passes are counted in overflow. Values within 1e-9 of
/// a bin edge count toward the upper bin.
struct ZoneSummary {
  std::optional<double> limit_kmh;  // empty = unknown zone
  std::int64_t count = 0;
  double mean_m = 0.0;
  double stddev_m = 0.0;  // population standard deviation
  std::array<std::int64_t, 50> histogram{};
  std::int64_t overflow = 0;
  std::int64_t positives = 0;  // close passes under the given criteria
  std::int64_t negatives = 0;
};

struct DatasetStats {
  static constexpr double kBinWidthM = 0.1;
  static constexpr double kHistogramMaxM = 5.0;

  std::vector<ZoneSummary> zones;  // ascending by limit, unknown last
};

DatasetStats dataset_stats(const std::vector<PassLogRecord>& records,
                           const CriteriaConfig& config = {});

}  // namespace cpkit
