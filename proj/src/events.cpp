#include "coughcount/events.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "coughcount/csv.hpp"
#include "coughcount/error.hpp"

namespace coughcount {

namespace {

std::string describe(const Event& e) {
  std::ostringstream os;
  os << "(" << e.onset << ", " << e.offset << ")";
  return os.str();
}

}  // namespace

void ScoringParams::validate() const {
  const bool finite = std::isfinite(tolerance_start) &&
                      std::isfinite(tolerance_end) &&
                      std::isfinite(max_event_duration) &&
                      std::isfinite(min_separation) && std::isfinite(min_overlap);
  if (!finite || tolerance_start < 0 || tolerance_end < 0 ||
      min_separation < 0 || min_overlap < 0 || max_event_duration <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "scoring params: tolerances, separation and overlap must be "
                ">= 0 and max_event_duration > 0");
  }
}

void validate_event(const Event& event) {
  if (!std::isfinite(event.onset) || !std::isfinite(event.offset) ||
      event.onset < 0 || !(event.offset > event.onset)) {
    throw Error(ErrorCode::kInvalidEvent, "invalid event " + describe(event));
  }
}

EventTimeline normalize_timeline(std::vector<Event> raw_events,
                                 std::string recording_id, double duration) {
  if (!std::isfinite(duration) || duration <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "recording '" + recording_id + "': duration must be positive");
  }
  for (auto& e : raw_events) {
    if (!std::isfinite(e.onset) || !std::isfinite(e.offset) ||
        !(e.offset > e.onset)) {
      throw Error(ErrorCode::kInvalidEvent, "recording '" + recording_id +
                                                "': invalid event " + describe(e));
    }
    if (e.onset >= duration) {
      throw Error(ErrorCode::kAnnotationOutOfRange,
                  "recording '" + recording_id + "': event " + describe(e) +
                      " starts at or after the recording end");
    }
    if (e.offset <= 0) {
      throw Error(ErrorCode::kInvalidEvent, "recording '" + recording_id +
                                                "': event " + describe(e) +
                                                " ends before the recording start");
    }
    e.onset = std::max(0.0, e.onset);
    e.offset = std::min(duration, e.offset);
  }
  std::sort(raw_events.begin(), raw_events.end(),
            [](const Event& a, const Event& b) {
              return a.onset < b.onset || (a.onset == b.onset && a.offset < b.offset);
            });

  EventTimeline out{std::move(recording_id), duration, {}};
  out.events.reserve(raw_events.size());
  for (const auto& e : raw_events) {
    if (!out.events.empty() && e.onset <= out.events.back().offset) {
      out.events.back().offset = std::max(out.events.back().offset, e.offset);
    } else {
      out.events.push_back(e);
    }
  }
  return out;
}

EventTimeline split_long_events(const EventTimeline& timeline,
                                double max_event_duration) {
  if (!(max_event_duration > 0) || !std::isfinite(max_event_duration)) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_event_duration must be positive");
  }
  EventTimeline out{timeline.recording_id, timeline.duration, {}};
  out.events.reserve(timeline.events.size());
  for (const auto& e : timeline.events) {
    if (e.duration() <= max_event_duration) {
      out.events.push_back(e);
      continue;
    }
    // Boundaries are onset + k * max. Rounding can leave a piece an ulp
    // longer than max, so each boundary is pulled back until it fits.
    double start = e.onset;
    while (e.offset - start > max_event_duration) {
      double end = start + max_event_duration;
      while (end - start > max_event_duration) end = std::nextafter(end, start);
      out.events.push_back({start, end});
      start = end;
    }
    if (e.offset > start) out.events.push_back({start, e.offset});
  }
  return out;
}

Event extend_with_tolerance(const Event& event, const ScoringParams& params) {
  return {std::max(0.0, event.onset - params.tolerance_start),
          event.offset + params.tolerance_end};
}

EventTimeline merge_close_events(const EventTimeline& timeline, double min_gap) {
  EventTimeline out{timeline.recording_id, timeline.duration, {}};
  for (const auto& e : timeline.events) {
    if (!out.events.empty() && e.onset - out.events.back().offset < min_gap) {
      out.events.back().offset = std::max(out.events.back().offset, e.offset);
    } else {
      out.events.push_back(e);
    }
  }
  return out;
}

bool is_normalized(const EventTimeline& timeline) {
  if (!(timeline.duration > 0)) return false;
  for (std::size_t i = 0; i < timeline.events.size(); ++i) {
    const auto& e = timeline.events[i];
    if (!std::isfinite(e.onset) || !std::isfinite(e.offset) || e.onset < 0 ||
        !(e.offset > e.onset) || e.offset > timeline.duration) {
      return false;
    }
    if (i > 0 && e.onset < timeline.events[i - 1].offset) return false;
  }
  return true;
}

EventTimeline prepare_for_scoring(const EventTimeline& timeline,
                                  const ScoringParams& params) {
  params.validate();
  // Already-normalized input is kept as is: touching events (for example
  // split pieces or truncated segmenter output) stay separate.
  auto tl = is_normalized(timeline)
                ? timeline
                : normalize_timeline(timeline.events, timeline.recording_id,
                                     timeline.duration);
  if (params.min_separation > 0) tl = merge_close_events(tl, params.min_separation);
  return split_long_events(tl, params.max_event_duration);
}

double covered_duration(const EventTimeline& timeline) {
  double total = 0.0;
  for (const auto& e : timeline.events) total += e.duration();
  return total;
}

EventRows read_event_csv(std::istream& in, const std::string& source_name) {
  const auto rows =
      csv::read(in, {"recording_id", "onset_s", "offset_s"}, source_name);
  EventRows out;
  std::map<std::string, std::size_t> index;
  for (const auto& row : rows) {
    const std::string where = source_name + ":" + std::to_string(row.line);
    const Event e{csv::parse_double(row.fields[1], where),
                  csv::parse_double(row.fields[2], where)};
    if (!(e.offset > e.onset) || e.onset < 0) {
      throw Error(ErrorCode::kInvalidEvent, where + ": invalid event " + describe(e));
    }
    auto [it, inserted] = index.try_emplace(row.fields[0], out.size());
    if (inserted) out.push_back({row.fields[0], {}});
    out[it->second].second.push_back(e);
  }
  return out;
}

EventRows read_event_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open event list: " + path);
  return read_event_csv(in, path);
}

void write_event_csv(std::ostream& out,
                     const std::vector<EventTimeline>& timelines) {
  out << "recording_id,onset_s,offset_s\n";
  for (const auto& tl : timelines) {
    for (const auto& e : tl.events) {
      out << csv::escape(tl.recording_id) << ',' << csv::format_double(e.onset)
          << ',' << csv::format_double(e.offset) << '\n';
    }
  }
}

void write_event_csv_file(const std::string& path,
                          const std::vector<EventTimeline>& timelines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write event list: " + path);
  write_event_csv(out, timelines);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

std::vector<EventTimeline> build_timelines(
    const EventRows& rows, const std::map<std::string, double>& durations,
    bool keep_touching) {
  std::vector<EventTimeline> out;
  std::map<std::string, const std::vector<Event>*> by_id;
  for (const auto& [id, events] : rows) {
    if (!durations.count(id)) {
      throw Error(ErrorCode::kUnknownRecording,
                  "events reference unknown recording '" + id + "'");
    }
    by_id[id] = &events;
  }
  for (const auto& [id, duration] : durations) {
    auto it = by_id.find(id);
    if (keep_touching && it != by_id.end()) {
      EventTimeline as_is{id, duration, *it->second};
      if (is_normalized(as_is)) {
        out.push_back(std::move(as_is));
        continue;
      }
    }
    out.push_back(normalize_timeline(
        it == by_id.end() ? std::vector<Event>{} : *it->second, id, duration));
  }
  return out;
}

}  // namespace coughcount
