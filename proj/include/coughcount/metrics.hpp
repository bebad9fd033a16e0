#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace coughcount {

// Event-level counts for one recording or an aggregate. There is no TN in
// event-based scoring.
struct EventCounts {
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t fp = 0;
  std::int64_t n_ref = 0;
  std::int64_t n_pred = 0;
  double monitored_duration = 0.0;  // seconds

  friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

// Window-level confusion counts.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double monitored_duration = 0.0;  // seconds

  std::int64_t total() const { return tp + tn + fp + fn; }

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

enum class ScoringMode { kSample, kEvent };

const char* to_string(ScoringMode mode);

// Metric values plus the counts they were computed from. A ratio whose
// denominator is zero is absent rather than 0 or 1. Sample-only metrics
// (sp, ac, npv, roc_auc) are absent in event mode.
struct MetricReport {
  ScoringMode mode = ScoringMode::kEvent;

  std::optional<double> se;
  std::optional<double> sp;
  std::optional<double> ac;
  std::optional<double> pr;
  std::optional<double> f1;
  std::optional<double> npv;
  std::optional<double> roc_auc;
  double fp_per_hr = 0.0;

  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::optional<std::int64_t> tn;
  double monitored_duration = 0.0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

// num / den, absent when den == 0.
std::optional<double> ratio(double num, double den);

// 2·SE·PR / (SE + PR); absent if either input is absent or both are 0.
std::optional<double> f1_score(std::optional<double> se, std::optional<double> pr);

// fp per hour of monitored time; throws kZeroDuration when duration <= 0.
double fp_per_hour(std::int64_t fp, double monitored_duration);

}  // namespace coughcount
