#include "coughcount/eb_scorer.hpp"

#include <algorithm>
#include <vector>

#include "coughcount/error.hpp"

namespace coughcount {

namespace {

void require_scorable(const EventTimeline& tl, const ScoringParams& params,
                      const char* role) {
  if (!is_normalized(tl)) {
    throw Error(ErrorCode::kUnnormalized, std::string(role) + " timeline '" +
                                              tl.recording_id +
                                              "' is not normalized");
  }
  for (const auto& e : tl.events) {
    if (e.duration() > params.max_event_duration) {
      throw Error(ErrorCode::kUnnormalized,
                  std::string(role) + " timeline '" + tl.recording_id +
                      "' has events longer than max_event_duration; split first");
    }
  }
}

}  // namespace

EventCounts score_events(const EventTimeline& reference,
                         const EventTimeline& predicted,
                         const ScoringParams& params) {
  params.validate();
  if (reference.recording_id != predicted.recording_id ||
      reference.duration != predicted.duration) {
    throw Error(ErrorCode::kRecordingMismatch,
                "cannot score '" + predicted.recording_id + "' against '" +
                    reference.recording_id + "'");
  }
  require_scorable(reference, params, "reference");
  require_scorable(predicted, params, "predicted");

  const auto& preds = predicted.events;
  std::vector<bool> pred_matched(preds.size(), false);
  EventCounts counts;
  counts.n_ref = static_cast<std::int64_t>(reference.events.size());
  counts.n_pred = static_cast<std::int64_t>(preds.size());
  counts.monitored_duration = reference.duration;

  // Extended reference onsets never decrease, so the first candidate
  // prediction index only moves forward.
  std::size_t first = 0;
  for (const auto& ref : reference.events) {
    const Event ext = extend_with_tolerance(ref, params);
    while (first < preds.size() && preds[first].offset <= ext.onset) ++first;
    bool hit = false;
    for (std::size_t j = first; j < preds.size() && preds[j].onset < ext.offset; ++j) {
      const double overlap = std::min(ext.offset, preds[j].offset) -
                             std::max(ext.onset, preds[j].onset);
      if (overlap > params.min_overlap) {
        hit = true;
        pred_matched[j] = true;
      }
    }
    if (hit) {
      ++counts.tp;
    } else {
      ++counts.fn;
    }
  }
  counts.fp = static_cast<std::int64_t>(
      std::count(pred_matched.begin(), pred_matched.end(), false));
  return counts;
}

EventCounts aggregate_counts(std::span<const EventCounts> per_recording) {
  if (per_recording.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot aggregate an empty count list");
  }
  EventCounts total;
  for (const auto& c : per_recording) {
    total.tp += c.tp;
    total.fn += c.fn;
    total.fp += c.fp;
    total.n_ref += c.n_ref;
    total.n_pred += c.n_pred;
    total.monitored_duration += c.monitored_duration;
  }
  return total;
}

MetricReport eb_metrics(const EventCounts& counts) {
  MetricReport r;
  r.mode = ScoringMode::kEvent;
  r.tp = counts.tp;
  r.fp = counts.fp;
  r.fn = counts.fn;
  r.monitored_duration = counts.monitored_duration;
  r.se = ratio(static_cast<double>(counts.tp),
               static_cast<double>(counts.tp + counts.fn));
  r.pr = ratio(static_cast<double>(counts.tp),
               static_cast<double>(counts.tp + counts.fp));
  r.f1 = f1_score(r.se, r.pr);
  r.fp_per_hr = fp_per_hour(counts.fp, counts.monitored_duration);
  return r;
}

}  // namespace coughcount
