#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "coughcount/events.hpp"
#include "coughcount/rng.hpp"

namespace testing_support {

using coughcount::Event;
using coughcount::EventTimeline;
using coughcount::Rng;

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("coughcount_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Raw events that may overlap, touch, or run past the end.
inline std::vector<Event> random_raw_events(Rng& rng, int max_events, double duration) {
  std::vector<Event> out;
  const auto n = rng.integer(0, max_events);
  for (std::int64_t i = 0; i < n; ++i) {
    const double onset = rng.uniform(0.0, duration * 0.98);
    double length = rng.uniform(0.01, 1.5);
    if (rng.bernoulli(0.1)) length = 0.6;
    out.push_back({onset, onset + length});
  }
  if (n >= 2 && rng.bernoulli(0.3) && out[0].offset < duration) {
    out.push_back({out[0].offset, out[0].offset + 0.2});  // touching
  }
  return out;
}

// Normalized, split timeline with up to max_events events. Times are
// snapped to a 10 ms grid half of the time so exact boundary contacts occur.
inline EventTimeline random_timeline(Rng& rng, int max_events, double duration,
                                     double max_event_duration, const std::string& id = "r") {
  auto raw = random_raw_events(rng, max_events, duration);
  if (rng.bernoulli(0.5)) {
    for (auto& e : raw) {
      e.onset = std::round(e.onset * 100.0) / 100.0;
      e.offset = std::max(e.onset + 0.01, std::round(e.offset * 100.0) / 100.0);
    }
  }
  auto t = coughcount::normalize_timeline(raw, id, duration);
  return coughcount::split_long_events(t, max_event_duration);
}

}  // namespace testing_support
