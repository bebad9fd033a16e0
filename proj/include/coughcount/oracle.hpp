#pragma once

#include "coughcount/events.hpp"
#include "coughcount/metrics.hpp"

namespace coughcount::oracle {

// All-pairs reference matcher for cross-checking score_events. Quadratic, so
// meant for small instances (up to ~100 events). Shares no logic with the
// production scorer and performs no input validation.
EventCounts brute_force_score(const EventTimeline& reference,
                              const EventTimeline& predicted,
                              const ScoringParams& params);

}  // namespace coughcount::oracle
