#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coughcount/events.hpp"
#include "coughcount/metrics.hpp"

namespace coughcount {

struct Window {
  double start = 0.0;
  double score = 0.0;
  bool decision = false;

  friend bool operator==(const Window&, const Window&) = default;
};

// Fixed-length, possibly overlapping classifier windows of one recording.
// Window k starts at k * hop.
struct WindowSeries {
  std::string recording_id;
  double window_length = 0.0;
  double hop = 0.0;
  double recording_duration = 0.0;
  // False when only binary decisions are known; ROC-AUC is then absent.
  bool has_scores = true;
  std::vector<Window> windows;

  friend bool operator==(const WindowSeries&, const WindowSeries&) = default;
};

// floor((duration - length) / hop) + 1, or 0 when length > duration. The
// final partial window is dropped. A 1e-9 slack absorbs decimal rounding
// (4.0 s in 0.8 s windows is 5 windows, not 4).
std::size_t window_count(double duration, double window_length, double hop);

// Positive iff [start, start + length) overlaps a reference event by > 0 s.
// Returns an empty sequence (with a warning) if the window is longer than
// the recording.
std::vector<bool> label_windows(const EventTimeline& reference,
                                double window_length, double hop);

ConfusionCounts confusion_counts(const WindowSeries& decisions,
                                 const std::vector<bool>& labels);

ConfusionCounts aggregate_confusion(std::span<const ConfusionCounts> counts);

MetricReport sb_metrics(const ConfusionCounts& counts);

// Trapezoidal area under the ROC curve over all distinct score thresholds.
// Ties contribute half. Throws kSingleClass unless both labels are present.
double roc_auc(std::span<const double> scores, const std::vector<bool>& labels);

// sb_metrics plus ROC-AUC from pooled window scores, when every series has
// scores and both classes occur.
MetricReport sb_report(std::span<const WindowSeries> series,
                       std::span<const std::vector<bool>> labels);

}  // namespace coughcount
