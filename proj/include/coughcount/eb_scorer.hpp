#pragma once

#include <span>

#include "coughcount/events.hpp"
#include "coughcount/metrics.hpp"

namespace coughcount {

// Tolerance-aware any-overlap matching of one recording.
//
// A reference event is a TP when some predicted event overlaps its
// tolerance-extended interval by more than params.min_overlap; otherwise it
// is an FN. A predicted event is an FP when it overlaps no extended reference
// event. Several predictions on one reference make a single TP, and one
// prediction spanning several references makes each of them a TP.
//
// Both timelines must already be normalized and split to
// params.max_event_duration (see prepare_for_scoring); the scorer does not
// repair its inputs.
EventCounts score_events(const EventTimeline& reference,
                         const EventTimeline& predicted,
                         const ScoringParams& params);

// Field-wise sum. Throws kEmptyInput on an empty list.
EventCounts aggregate_counts(std::span<const EventCounts> per_recording);

// SE, PR, F1 and FP/hr.
MetricReport eb_metrics(const EventCounts& counts);

}  // namespace coughcount
