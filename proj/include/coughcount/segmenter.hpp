#pragma once

#include <optional>
#include <span>
#include <vector>

#include "coughcount/events.hpp"
#include "coughcount/sb_scorer.hpp"
#include "coughcount/wav.hpp"

namespace coughcount {

// Turns overlapping classifier window decisions plus the raw audio into one
// event per cough:
//
//   positive windows -> union of positive spans
//   audio            -> short-time power envelope
//   per span         -> hysteresis regions around explosive spikes
//   regions          -> merge physiologically impossible neighbours,
//                       place onset/offset from the phase model and the
//                       running cough duration, split anything too long.

struct SecondsRange {
  double lo = 0.0;
  double hi = 0.0;
};

// Durations of the phases of a cough, in seconds.
struct CoughPhaseModel {
  SecondsRange compressive{0.0, 0.2};
  SecondsRange spike{0.03, 0.05};
  SecondsRange expiratory{0.2, 0.5};
  SecondsRange typical_duration{0.3, 0.5};
  double max_duration = 0.6;

  // Shortest plausible audible cough: spike plus expiratory minimum.
  double min_duration() const { return spike.lo + expiratory.lo; }

  void validate() const;
};

struct SegmenterConfig {
  // Hysteresis thresholds as fractions of the positive span's peak power.
  double hi_fraction = 0.3;
  double lo_fraction = 0.1;
  // Spikes closer than this belong to one cough.
  double min_peak_separation = 0.20;
  CoughPhaseModel phase_model;
  // Seed of the running average cough duration at the start of each burst.
  double avg_duration_init = 0.35;
  // An event-free gap this long ends a burst and resets the running average.
  double burst_gap = 1.0;
  double frame_length = 0.010;
  double frame_hop = 0.005;

  void validate() const;
};

// Mean squared amplitude per frame. Frame i covers
// [start_time + i * frame_hop, start_time + i * frame_hop + frame_length).
struct PowerEnvelope {
  double start_time = 0.0;
  double frame_length = 0.0;
  double frame_hop = 0.0;
  std::vector<double> values;

  double frame_start(std::size_t i) const {
    return start_time + static_cast<double>(i) * frame_hop;
  }
  double frame_center(std::size_t i) const {
    return frame_start(i) + 0.5 * frame_length;
  }
};

struct SpikeRegion {
  double start = 0.0;
  double end = 0.0;
  double peak_time = 0.0;
  double peak_power = 0.0;

  friend bool operator==(const SpikeRegion&, const SpikeRegion&) = default;
};

// Running mean of event durations within the current burst.
class DurationTracker {
 public:
  DurationTracker(double init, double burst_gap)
      : init_(init), burst_gap_(burst_gap), average_(init) {}

  // Estimate for an event starting at `onset`; resets at burst boundaries.
  double estimate(double onset);
  void complete(const Event& event, double lo, double hi);

  double average() const { return average_; }
  int completed_in_burst() const { return count_; }

 private:
  double init_;
  double burst_gap_;
  double average_;
  double sum_ = 0.0;
  int count_ = 0;
  std::optional<double> last_offset_;
};

// Frame lengths are rounded to whole samples; a final partial frame is
// averaged over the samples it has. Throws kEmptyInput on an empty signal.
PowerEnvelope power_envelope(std::span<const float> samples, double sample_rate,
                             double frame_length, double frame_hop);

// Frames belong to a span when their centre lies inside it. Within each
// span a region opens at envelope >= hi_fraction * span peak and stays open
// while envelope >= lo_fraction * span peak. Regions are clipped to their span
// and end one hop after their last frame starts, so consecutive regions never
// touch.
std::vector<SpikeRegion> hysteresis_regions(const PowerEnvelope& envelope,
                                            const EventTimeline& positive_spans,
                                            const SegmenterConfig& config);

std::vector<SpikeRegion> merge_close_regions(std::vector<SpikeRegion> regions,
                                             double min_peak_separation);

// Merges close regions, then places each event at
//   onset  = region start
//   offset = max(region end, onset + clamp(running duration,
//                                         min_duration, max_duration))
// truncated at the next event's onset and the recording end, and finally
// splits events longer than max_duration.
EventTimeline refine_events(std::vector<SpikeRegion> regions,
                            DurationTracker& tracker,
                            const SegmenterConfig& config,
                            const std::string& recording_id, double duration);

// Union of positive windows, clipped to the recording.
EventTimeline positive_spans(const WindowSeries& decisions, double duration);

// Full pipeline. Decisions are expected on a 50%-overlap grid.
EventTimeline segment_events(const Audio& audio, const WindowSeries& decisions,
                             const SegmenterConfig& config = {});

// Same pipeline with the positive spans given directly.
EventTimeline segment_spans(const Audio& audio, const EventTimeline& spans,
                            const SegmenterConfig& config = {});

}  // namespace coughcount
