#include "coughcount/oracle.hpp"

#include <vector>

namespace coughcount::oracle {

EventCounts brute_force_score(const EventTimeline& reference,
                              const EventTimeline& predicted,
                              const ScoringParams& params) {
  const auto& refs = reference.events;
  const auto& preds = predicted.events;
  // overlaps[i][j]: reference i (tolerance-extended) against prediction j.
  std::vector<std::vector<bool>> overlaps(refs.size(),
                                          std::vector<bool>(preds.size(), false));
  for (std::size_t i = 0; i < refs.size(); ++i) {
    double lo = refs[i].onset - params.tolerance_start;
    if (lo < 0.0) lo = 0.0;
    const double hi = refs[i].offset + params.tolerance_end;
    for (std::size_t j = 0; j < preds.size(); ++j) {
      const double right = preds[j].offset < hi ? preds[j].offset : hi;
      const double left = preds[j].onset > lo ? preds[j].onset : lo;
      overlaps[i][j] = right - left > params.min_overlap;
    }
  }

  EventCounts counts;
  counts.n_ref = static_cast<std::int64_t>(refs.size());
  counts.n_pred = static_cast<std::int64_t>(preds.size());
  counts.monitored_duration = reference.duration;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < preds.size(); ++j) any = any || overlaps[i][j];
    if (any) {
      counts.tp += 1;
    } else {
      counts.fn += 1;
    }
  }
  for (std::size_t j = 0; j < preds.size(); ++j) {
    bool any = false;
    for (std::size_t i = 0; i < refs.size(); ++i) any = any || overlaps[i][j];
    if (!any) counts.fp += 1;
  }
  return counts;
}

}  // namespace coughcount::oracle
