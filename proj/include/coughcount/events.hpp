#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace coughcount {

// One cough occurrence, in seconds from the start of its recording.
struct Event {
  double onset = 0.0;
  double offset = 0.0;

  double duration() const { return offset - onset; }

  friend bool operator==(const Event&, const Event&) = default;
};

// Sorted, non-overlapping events of one recording. Adjacent events may touch
// (split pieces do), but never overlap.
struct EventTimeline {
  std::string recording_id;
  double duration = 0.0;
  std::vector<Event> events;

  friend bool operator==(const EventTimeline&, const EventTimeline&) = default;
};

struct ScoringParams {
  double tolerance_start = 0.25;
  double tolerance_end = 0.25;
  double max_event_duration = 0.6;
  // Gap below which predicted events are merged before scoring, as a
  // pre-pass in prepare_for_scoring(). 0 disables it.
  double min_separation = 0.0;
  // A match needs strictly more than this much overlap, in seconds.
  double min_overlap = 0.0;

  void validate() const;
};

// Throws kInvalidEvent unless offset > onset, onset >= 0 and both finite.
void validate_event(const Event& event);

// Sorts, merges overlapping or touching events, clips to [0, duration].
EventTimeline normalize_timeline(std::vector<Event> raw_events,
                                 std::string recording_id, double duration);

// Every event longer than max_event_duration becomes ceil(d / max)
// contiguous pieces; all but the last are max long.
EventTimeline split_long_events(const EventTimeline& timeline,
                                double max_event_duration);

Event extend_with_tolerance(const Event& event, const ScoringParams& params);

// Merges consecutive events separated by less than min_gap seconds.
EventTimeline merge_close_events(const EventTimeline& timeline, double min_gap);

// Sorted, no overlaps, all events valid and inside [0, duration].
bool is_normalized(const EventTimeline& timeline);

// Normalize (unless already normalized), optionally merge events closer than
// params.min_separation, then split long ones.
EventTimeline prepare_for_scoring(const EventTimeline& timeline,
                                  const ScoringParams& params);

double covered_duration(const EventTimeline& timeline);

// Event list CSV: `recording_id,onset_s,offset_s`. Rows are grouped by
// recording in first-appearance order; events keep file order.
using EventRows = std::vector<std::pair<std::string, std::vector<Event>>>;

EventRows read_event_csv(std::istream& in, const std::string& source_name);
EventRows read_event_csv_file(const std::string& path);
void write_event_csv(std::ostream& out,
                     const std::vector<EventTimeline>& timelines);
void write_event_csv_file(const std::string& path,
                          const std::vector<EventTimeline>& timelines);

// Pairs event rows with recording durations, normalizing each timeline.
// Recordings listed in durations but absent from rows get empty timelines.
// With keep_touching, rows that are already sorted and non-overlapping are
// taken as is, so touching events (segmenter output) stay separate.
std::vector<EventTimeline> build_timelines(
    const EventRows& rows, const std::map<std::string, double>& durations,
    bool keep_touching = false);

}  // namespace coughcount
