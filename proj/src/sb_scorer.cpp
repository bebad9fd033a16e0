#include "coughcount/sb_scorer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coughcount/error.hpp"
#include "coughcount/log.hpp"

namespace coughcount {

std::size_t window_count(double duration, double window_length, double hop) {
  if (!(window_length > 0) || !(hop > 0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "window length and hop must be positive");
  }
  constexpr double kSlack = 1e-9;
  if (window_length > duration + kSlack) return 0;
  const double steps = std::floor((duration - window_length) / hop + kSlack);
  return static_cast<std::size_t>(std::max(0.0, steps)) + 1;
}

std::vector<bool> label_windows(const EventTimeline& reference,
                                double window_length, double hop) {
  const std::size_t n = window_count(reference.duration, window_length, hop);
  if (n == 0) {
    warn("recording '" + reference.recording_id +
         "' is shorter than one window; no windows labeled");
    return {};
  }
  std::vector<bool> labels(n, false);
  const auto& events = reference.events;
  std::size_t first = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double start = static_cast<double>(k) * hop;
    const double end = start + window_length;
    while (first < events.size() && events[first].offset <= start) ++first;
    for (std::size_t i = first; i < events.size() && events[i].onset < end; ++i) {
      if (std::min(end, events[i].offset) > std::max(start, events[i].onset)) {
        labels[k] = true;
        break;
      }
    }
  }
  return labels;
}

ConfusionCounts confusion_counts(const WindowSeries& decisions,
                                 const std::vector<bool>& labels) {
  if (decisions.windows.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "recording '" + decisions.recording_id + "': " +
                    std::to_string(decisions.windows.size()) + " decisions vs " +
                    std::to_string(labels.size()) + " labels");
  }
  ConfusionCounts c;
  c.monitored_duration = decisions.recording_duration;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = decisions.windows[i].decision;
    if (labels[i]) {
      predicted ? ++c.tp : ++c.fn;
    } else {
      predicted ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

ConfusionCounts aggregate_confusion(std::span<const ConfusionCounts> counts) {
  if (counts.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot aggregate an empty count list");
  }
  ConfusionCounts total;
  for (const auto& c : counts) {
    total.tp += c.tp;
    total.tn += c.tn;
    total.fp += c.fp;
    total.fn += c.fn;
    total.monitored_duration += c.monitored_duration;
  }
  return total;
}

MetricReport sb_metrics(const ConfusionCounts& c) {
  const auto tp = static_cast<double>(c.tp);
  const auto tn = static_cast<double>(c.tn);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  MetricReport r;
  r.mode = ScoringMode::kSample;
  r.tp = c.tp;
  r.fp = c.fp;
  r.fn = c.fn;
  r.tn = c.tn;
  r.monitored_duration = c.monitored_duration;
  r.se = ratio(tp, tp + fn);
  r.sp = ratio(tn, tn + fp);
  r.ac = ratio(tp + tn, tp + tn + fp + fn);
  r.pr = ratio(tp, tp + fp);
  r.f1 = f1_score(r.se, r.pr);
  r.npv = ratio(tn, tn + fn);
  r.fp_per_hr = fp_per_hour(c.fp, c.monitored_duration);
  return r;
}

double roc_auc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "roc_auc: scores and labels differ in length");
  }
  const auto n_pos = static_cast<std::uint64_t>(
      std::count(labels.begin(), labels.end(), true));
  const std::uint64_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorCode::kSingleClass,
                "roc_auc needs at least one positive and one negative label");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // Sweep thresholds from high to low. Each tied group adds one trapezoid;
  // twice its area in count units is d_fp * (2 * tp_before + d_tp).
  std::uint64_t tp = 0;
  std::uint64_t twice_area = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t d_tp = 0;
    std::uint64_t d_fp = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      labels[order[j]] ? ++d_tp : ++d_fp;
      ++j;
    }
    twice_area += d_fp * (2 * tp + d_tp);
    tp += d_tp;
    i = j;
  }
  return static_cast<double>(twice_area) /
         (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MetricReport sb_report(std::span<const WindowSeries> series,
                       std::span<const std::vector<bool>> labels) {
  if (series.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "sb_report: one label sequence per series");
  }
  std::vector<ConfusionCounts> counts;
  counts.reserve(series.size());
  std::vector<double> pooled_scores;
  std::vector<bool> pooled_labels;
  bool all_scored = true;
  for (std::size_t i = 0; i < series.size(); ++i) {
    counts.push_back(confusion_counts(series[i], labels[i]));
    all_scored = all_scored && series[i].has_scores;
    for (std::size_t k = 0; k < labels[i].size(); ++k) {
      pooled_scores.push_back(series[i].windows[k].score);
      pooled_labels.push_back(labels[i][k]);
    }
  }
  MetricReport report = sb_metrics(aggregate_confusion(counts));
  const auto n_pos = std::count(pooled_labels.begin(), pooled_labels.end(), true);
  if (all_scored && n_pos > 0 &&
      n_pos < static_cast<std::ptrdiff_t>(pooled_labels.size())) {
    report.roc_auc = roc_auc(pooled_scores, pooled_labels);
  }
  return report;
}

}  // namespace coughcount
