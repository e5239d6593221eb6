#include "cpkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cpkit {

namespace {

constexpr double kBinEdgeTolerance = 1e-9;

double ratio(std::int64_t numerator, std::int64_t denominator) {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

const char* to_string(MatchOutcome outcome) {
  switch (outcome) {
    case MatchOutcome::TruePositive:
      return "true_positive";
    case MatchOutcome::OutRight:
      return "out_right";
    case MatchOutcome::OutForward:
      return "out_forward";
    case MatchOutcome::OutTime:
      return "out_time";
    case MatchOutcome::NotDetected:
      return "not_detected";
  }
  throw std::invalid_argument("unknown outcome value");
}

EventOutcome match_event(std::span<const TimedVerdict> clip_verdicts,
                         const PassingEvent& event, const MatchWindow& window) {
  if (!(window.pre_s >= 0.0) || !(window.post_s >= 0.0)) {
    throw std::invalid_argument("match window must be non-negative");
  }
  const double lo = event.capture_time_s - window.pre_s;
  const double hi = event.capture_time_s + window.post_s;
  const auto inside = [&](double t) { return t > lo && t < hi; };

  std::optional<double> first_inside_flagged;
  std::optional<double> nearest_outside_flagged;
  double nearest_outside_gap = std::numeric_limits<double>::infinity();
  const TimedVerdict* nearest_inside = nullptr;
  double nearest_inside_gap = std::numeric_limits<double>::infinity();

  double previous_t = -std::numeric_limits<double>::infinity();
  for (const TimedVerdict& timed : clip_verdicts) {
    if (timed.t < previous_t) {
      throw std::invalid_argument("verdict stream must be sorted by t");
    }
    previous_t = timed.t;

    const double gap = std::abs(timed.t - event.capture_time_s);
    if (inside(timed.t)) {
      if (timed.verdict.is_cp && !first_inside_flagged) {
        first_inside_flagged = timed.t;
      }
      // Strict < keeps the earliest verdict on equidistant ties.
      if (gap < nearest_inside_gap) {
        nearest_inside_gap = gap;
        nearest_inside = &timed;
      }
    } else if (timed.verdict.is_cp && gap < nearest_outside_gap) {
      nearest_outside_gap = gap;
      nearest_outside_flagged = timed.t;
    }
  }

  if (first_inside_flagged) {
    return EventOutcome{event, MatchOutcome::TruePositive, first_inside_flagged};
  }
  if (nearest_outside_flagged) {
    return EventOutcome{event, MatchOutcome::OutTime, nearest_outside_flagged};
  }
  if (nearest_inside != nullptr) {
    const CpVerdict& verdict = nearest_inside->verdict;
    if (!verdict.clearance_violated && verdict.overlapping && verdict.on_side) {
      return EventOutcome{event, MatchOutcome::OutRight, std::nullopt};
    }
    if (!verdict.overlapping) {
      return EventOutcome{event, MatchOutcome::OutForward, std::nullopt};
    }
  }
  return EventOutcome{event, MatchOutcome::NotDetected, std::nullopt};
}

MetricsReport scene_metrics(const std::vector<bool>& predicted,
                            const std::vector<bool>& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("predicted and truth must have equal length");
  }
  MetricsReport report;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (truth[i]) {
      (predicted[i] ? report.confusion.tp : report.confusion.fn) += 1;
    } else {
      (predicted[i] ? report.confusion.fp : report.confusion.tn) += 1;
    }
  }
  const ConfusionMatrix& c = report.confusion;
  if (c.total() > 0) {
    report.accuracy = ratio(c.tp + c.tn, c.total());
    report.accuracy_defined = true;
  }
  if (c.tp + c.fp > 0) {
    report.precision = ratio(c.tp, c.tp + c.fp);
    report.precision_defined = true;
  }
  if (c.tp + c.fn > 0) {
    report.recall = ratio(c.tp, c.tp + c.fn);
    report.recall_defined = true;
  }
  if (report.precision + report.recall > 0.0) {
    report.f1 = 2.0 * report.precision * report.recall / (report.precision + report.recall);
    report.f1_defined = true;
  }
  return report;
}

double roc_auc(const std::vector<double>& scores, const std::vector<bool>& truth) {
  if (scores.size() != truth.size()) {
    throw std::invalid_argument("scores and truth must have equal length");
  }
  for (const double score : scores) {
    if (std::isnan(score)) {
      throw std::invalid_argument("scores must not contain NaN");
    }
  }
  std::int64_t positives = 0;
  for (const bool label : truth) {
    positives += label ? 1 : 0;
  }
  const std::int64_t negatives = static_cast<std::int64_t>(truth.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("roc_auc needs both a positive and a negative example");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Rank statistic with average ranks over tie groups.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      ++j;
    }
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (truth[order[k]]) {
        positive_rank_sum += average_rank;
      }
    }
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

ErrorBreakdown error_breakdown(std::span<const EventOutcome> outcomes) {
  ErrorBreakdown breakdown;
  for (const EventOutcome& outcome : outcomes) {
    switch (outcome.outcome) {
      case MatchOutcome::TruePositive:
        breakdown.true_positive += 1;
        break;
      case MatchOutcome::OutRight:
        breakdown.out_right += 1;
        break;
      case MatchOutcome::OutForward:
        breakdown.out_forward += 1;
        break;
      case MatchOutcome::OutTime:
        breakdown.out_time += 1;
        break;
      case MatchOutcome::NotDetected:
        breakdown.not_detected += 1;
        break;
    }
  }
  return breakdown;
}

EventEvaluation evaluate_events(
    const std::map<std::string, std::vector<TimedVerdict>>& verdicts_by_clip,
    const std::vector<EventRecord>& events, const MatchWindow& window) {
  static const std::vector<TimedVerdict> kNoVerdicts;

  EventEvaluation result;
  result.outcomes.reserve(events.size());
  std::vector<EventOutcome> positive_outcomes;
  for (const EventRecord& record : events) {
    const auto it = verdicts_by_clip.find(record.clip_id);
    const std::vector<TimedVerdict>& clip_verdicts =
        it != verdicts_by_clip.end() ? it->second : kNoVerdicts;
    EventOutcome outcome = match_event(clip_verdicts, record.event, window);
    const bool flagged_in_window = outcome.outcome == MatchOutcome::TruePositive;
    if (record.event.is_cp) {
      (flagged_in_window ? result.confusion.tp : result.confusion.fn) += 1;
      positive_outcomes.push_back(outcome);
    } else {
      (flagged_in_window ? result.confusion.fp : result.confusion.tn) += 1;
    }
    result.outcomes.push_back(std::move(outcome));
  }
  result.breakdown = error_breakdown(positive_outcomes);
  if (result.confusion.total() > 0) {
    result.accuracy = ratio(result.confusion.tp + result.confusion.tn,
                            result.confusion.total());
    result.accuracy_defined = true;
  }
  return result;
}

DatasetStats dataset_stats(const std::vector<PassLogRecord>& records,
                           const CriteriaConfig& config) {
  validate(config);

  struct Accumulator {
    std::vector<double> distances;
    ZoneSummary summary;
  };
  std::map<double, Accumulator> known;
  Accumulator unknown;

  for (const PassLogRecord& record : records) {
    if (!(std::isfinite(record.lateral_distance_m) && record.lateral_distance_m >= 0.0)) {
      throw std::invalid_argument("lateral_distance_m must be >= 0");
    }
    Accumulator& acc =
        record.speed_limit_kmh ? known[*record.speed_limit_kmh] : unknown;
    acc.summary.limit_kmh = record.speed_limit_kmh;
    acc.summary.count += 1;
    acc.distances.push_back(record.lateral_distance_m);

    const std::size_t bin = static_cast<std::size_t>(
        std::floor(record.lateral_distance_m / DatasetStats::kBinWidthM + kBinEdgeTolerance));
    if (bin < acc.summary.histogram.size()) {
      acc.summary.histogram[bin] += 1;
    } else {
      acc.summary.overflow += 1;
    }

    std::optional<SpeedZone> zone;
    if (record.speed_limit_kmh) {
      zone = SpeedZone{*record.speed_limit_kmh};
    }
    (label_pass_event(record.lateral_distance_m, zone, config) ? acc.summary.positives
                                                                : acc.summary.negatives) += 1;
  }

  const auto finalize = [](Accumulator& acc) {
    const double count = static_cast<double>(acc.distances.size());
    const double mean =
        std::accumulate(acc.distances.begin(), acc.distances.end(), 0.0) / count;
    double squared = 0.0;
    for (const double d : acc.distances) {
      squared += (d - mean) * (d - mean);
    }
    acc.summary.mean_m = mean;
    acc.summary.stddev_m = std::sqrt(squared / count);
    return acc.summary;
  };

  DatasetStats stats;
  stats.zones.reserve(known.size() + 1);
  for (auto& [limit, acc] : known) {
    stats.zones.push_back(finalize(acc));
  }
  if (unknown.summary.count > 0) {
    stats.zones.push_back(finalize(unknown));
  }
  return stats;
}

}  // namespace cpkit
