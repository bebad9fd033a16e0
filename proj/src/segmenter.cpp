#include "coughcount/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coughcount/error.hpp"

namespace coughcount {

namespace {

bool valid_range(const SecondsRange& r) {
  return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo >= 0 && r.lo <= r.hi;
}

void check_output(const EventTimeline& tl, double max_duration) {
  for (std::size_t i = 0; i < tl.events.size(); ++i) {
    const auto& e = tl.events[i];
    if (!(e.duration() > 0) || e.duration() > max_duration ||
        (i > 0 && e.onset < tl.events[i - 1].offset)) {
      throw std::logic_error("segmenter produced an invalid timeline for '" +
                             tl.recording_id + "'");
    }
  }
}

}  // namespace

void CoughPhaseModel::validate() const {
  if (!valid_range(compressive) || !valid_range(spike) ||
      !valid_range(expiratory) || !valid_range(typical_duration) ||
      !(max_duration >= typical_duration.hi) || !(min_duration() > 0) ||
      min_duration() > max_duration) {
    throw Error(ErrorCode::kInvalidArgument, "invalid cough phase model");
  }
}

void SegmenterConfig::validate() const {
  phase_model.validate();
  if (!(lo_fraction > 0 && lo_fraction < hi_fraction && hi_fraction <= 1)) {
    throw Error(ErrorCode::kInvalidArgument,
                "segmenter: need 0 < lo_fraction < hi_fraction <= 1");
  }
  if (!(min_peak_separation > 0) || !(avg_duration_init > 0) ||
      !(burst_gap > 0) || !(frame_hop > 0) || !(frame_length >= frame_hop)) {
    throw Error(ErrorCode::kInvalidArgument,
                "segmenter: separation, durations and frames must be positive "
                "with frame_length >= frame_hop");
  }
}

double DurationTracker::estimate(double onset) {
  if (last_offset_ && onset - *last_offset_ >= burst_gap_) {
    average_ = init_;
    sum_ = 0.0;
    count_ = 0;
  }
  return average_;
}

void DurationTracker::complete(const Event& event, double lo, double hi) {
  sum_ += std::clamp(event.duration(), lo, hi);
  ++count_;
  average_ = sum_ / count_;
  last_offset_ = event.offset;
}

PowerEnvelope power_envelope(std::span<const float> samples, double sample_rate,
                             double frame_length, double frame_hop) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyInput, "power_envelope: empty signal");
  if (!(sample_rate > 0) || !(frame_hop > 0) || !(frame_length >= frame_hop)) {
    throw Error(ErrorCode::kInvalidArgument,
                "power_envelope: need sample_rate > 0 and frame_length >= frame_hop > 0");
  }
  const auto len = static_cast<std::size_t>(
      std::max(1L, std::lround(frame_length * sample_rate)));
  const auto hop = static_cast<std::size_t>(
      std::max(1L, std::lround(frame_hop * sample_rate)));
  const std::size_t n = samples.size();
  const std::size_t frames = n <= len ? 1 : (n - len + hop - 1) / hop + 1;

  PowerEnvelope env;
  env.frame_length = static_cast<double>(len) / sample_rate;
  env.frame_hop = static_cast<double>(hop) / sample_rate;
  env.values.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t begin = f * hop;
    const std::size_t end = std::min(n, begin + len);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double s = samples[i];
      acc += s * s;
    }
    env.values[f] = acc / static_cast<double>(end - begin);
  }
  return env;
}

std::vector<SpikeRegion> hysteresis_regions(const PowerEnvelope& envelope,
                                            const EventTimeline& positive_spans,
                                            const SegmenterConfig& config) {
  config.validate();
  std::vector<SpikeRegion> regions;
  const std::size_t n = envelope.values.size();
  std::size_t cursor = 0;
  for (const auto& span : positive_spans.events) {
    while (cursor < n && envelope.frame_center(cursor) < span.onset) ++cursor;
    std::size_t stop = cursor;
    while (stop < n && envelope.frame_center(stop) < span.offset) ++stop;
    if (stop == cursor) continue;

    const double peak = *std::max_element(envelope.values.begin() + cursor,
                                          envelope.values.begin() + stop);
    if (!(peak > 0)) continue;
    const double hi = config.hi_fraction * peak;
    const double lo = config.lo_fraction * peak;

    std::optional<std::size_t> open;
    std::size_t best = 0;
    auto close = [&](std::size_t last) {
      SpikeRegion r;
      r.start = std::max(span.onset, envelope.frame_start(*open));
      r.end = std::min(span.offset, envelope.frame_start(last) + envelope.frame_hop);
      if (r.end <= r.start) r.end = std::min(span.offset, r.start + envelope.frame_hop);
      r.peak_time = std::clamp(envelope.frame_center(best), r.start, r.end);
      r.peak_power = envelope.values[best];
      if (r.end > r.start) regions.push_back(r);
      open.reset();
    };
    for (std::size_t i = cursor; i < stop; ++i) {
      const double v = envelope.values[i];
      if (open) {
        if (v >= lo) {
          if (v > envelope.values[best]) best = i;
          continue;
        }
        close(i - 1);
      }
      if (v >= hi) {
        open = i;
        best = i;
      }
    }
    if (open) close(stop - 1);
    cursor = stop;
  }
  return regions;
}

std::vector<SpikeRegion> merge_close_regions(std::vector<SpikeRegion> regions,
                                             double min_peak_separation) {
  std::stable_sort(regions.begin(), regions.end(),
                   [](const SpikeRegion& a, const SpikeRegion& b) {
                     return a.peak_time < b.peak_time;
                   });
  std::vector<SpikeRegion> out;
  for (const auto& r : regions) {
    if (!out.empty() && r.peak_time - out.back().peak_time < min_peak_separation) {
      auto& cur = out.back();
      cur.start = std::min(cur.start, r.start);
      cur.end = std::max(cur.end, r.end);
      if (r.peak_power > cur.peak_power) {
        cur.peak_power = r.peak_power;
        cur.peak_time = r.peak_time;
      }
    } else {
      out.push_back(r);
    }
  }
  return out;
}

EventTimeline refine_events(std::vector<SpikeRegion> regions,
                            DurationTracker& tracker,
                            const SegmenterConfig& config,
                            const std::string& recording_id, double duration) {
  config.validate();
  const auto& phases = config.phase_model;
  const auto merged = merge_close_regions(std::move(regions), config.min_peak_separation);

  EventTimeline out{recording_id, duration, {}};
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const auto& r = merged[i];
    const double onset = r.start;
    if (onset >= duration) break;
    const double nominal = std::clamp(tracker.estimate(onset),
                                      phases.min_duration(), phases.max_duration);
    double offset = std::max(r.end, onset + nominal);
    if (i + 1 < merged.size()) offset = std::min(offset, merged[i + 1].start);
    offset = std::min(offset, duration);
    if (!(offset > onset)) continue;
    const Event e{onset, offset};
    tracker.complete(e, phases.min_duration(), phases.max_duration);
    out.events.push_back(e);
  }
  auto split = split_long_events(out, phases.max_duration);
  check_output(split, phases.max_duration);
  return split;
}

EventTimeline positive_spans(const WindowSeries& decisions, double duration) {
  std::vector<Event> raw;
  for (const auto& w : decisions.windows) {
    if (!w.decision || w.start >= duration) continue;
    raw.push_back({w.start, std::min(duration, w.start + decisions.window_length)});
  }
  return normalize_timeline(std::move(raw), decisions.recording_id, duration);
}

EventTimeline segment_spans(const Audio& audio, const EventTimeline& spans,
                            const SegmenterConfig& config) {
  config.validate();
  const double duration = audio.duration();
  if (spans.events.empty()) return {spans.recording_id, duration, {}};
  const auto envelope = power_envelope(audio.samples, audio.sample_rate,
                                       config.frame_length, config.frame_hop);
  DurationTracker tracker(config.avg_duration_init, config.burst_gap);
  return refine_events(hysteresis_regions(envelope, spans, config), tracker,
                       config, spans.recording_id, duration);
}

EventTimeline segment_events(const Audio& audio, const WindowSeries& decisions,
                             const SegmenterConfig& config) {
  const double duration = audio.duration();
  if (!(duration > 0)) throw Error(ErrorCode::kEmptyInput, "segment_events: empty audio");
  return segment_spans(audio, positive_spans(decisions, duration), config);
}

}  // namespace coughcount
