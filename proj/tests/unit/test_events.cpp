#include <catch_amalgamated.hpp>

#include <sstream>

#include "coughcount/error.hpp"
#include "coughcount/events.hpp"
#include "support.hpp"

using namespace coughcount;
using Catch::Approx;

namespace {

std::vector<Event> events_of(const EventTimeline& t) { return t.events; }

}  // namespace

TEST_CASE("normalize merges overlapping events") {
  auto t = normalize_timeline({{1.0, 1.4}, {1.3, 1.8}}, "a", 10.0);
  CHECK(events_of(t) == std::vector<Event>{{1.0, 1.8}});
}

TEST_CASE("normalize of nothing is empty") {
  auto t = normalize_timeline({}, "a", 10.0);
  CHECK(t.events.empty());
  CHECK(t.recording_id == "a");
  CHECK(t.duration == 10.0);
}

TEST_CASE("normalize sorts") {
  auto t = normalize_timeline({{2.0, 2.3}, {0.5, 0.9}}, "a", 10.0);
  CHECK(events_of(t) == std::vector<Event>{{0.5, 0.9}, {2.0, 2.3}});
}

TEST_CASE("normalize merges touching events and clips to the recording") {
  auto t = normalize_timeline({{1.0, 1.5}, {1.5, 1.7}, {9.8, 10.4}}, "a", 10.0);
  CHECK(events_of(t) == std::vector<Event>{{1.0, 1.7}, {9.8, 10.0}});
}

TEST_CASE("normalize rejects bad input") {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::kIo;
  };
  CHECK(code_of([] { normalize_timeline({{10.0, 10.5}}, "a", 10.0); }) ==
        ErrorCode::kAnnotationOutOfRange);
  CHECK(code_of([] { normalize_timeline({}, "a", 0.0); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { normalize_timeline({}, "a", -1.0); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { normalize_timeline({{1.0, 1.0}}, "a", 10.0); }) ==
        ErrorCode::kInvalidEvent);
}

TEST_CASE("normalize clips a negative onset to zero") {
  auto t = normalize_timeline({{-0.5, 1.0}}, "a", 10.0);
  CHECK(t.events == std::vector<Event>{{0.0, 1.0}});
}

TEST_CASE("split long events") {
  auto split = [](Event e) {
    return split_long_events(normalize_timeline({e}, "a", 10.0), 0.6).events;
  };
  auto pieces = split({0.0, 1.5});
  REQUIRE(pieces.size() == 3);
  CHECK(pieces[0].onset == 0.0);
  CHECK(pieces[0].offset == Approx(0.6));
  CHECK(pieces[1].onset == pieces[0].offset);
  CHECK(pieces[1].offset == Approx(1.2));
  CHECK(pieces[2].onset == pieces[1].offset);
  CHECK(pieces[2].offset == 1.5);

  CHECK(split({0.0, 0.5}) == std::vector<Event>{{0.0, 0.5}});

  pieces = split({0.0, 1.2});
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0].offset == Approx(0.6));
  CHECK(pieces[1].offset == 1.2);
}

TEST_CASE("extend with tolerance") {
  ScoringParams p;
  auto e = extend_with_tolerance({1.0, 1.4}, p);
  CHECK(e.onset == Approx(0.75));
  CHECK(e.offset == Approx(1.65));
  e = extend_with_tolerance({0.1, 0.4}, p);
  CHECK(e.onset == 0.0);
  CHECK(e.offset == Approx(0.65));
  p.tolerance_start = p.tolerance_end = 0.0;
  CHECK(extend_with_tolerance({1.0, 1.4}, p) == Event{1.0, 1.4});
}

TEST_CASE("property: normalize is idempotent") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const double duration = rng.uniform(1.0, 30.0);
    auto once = normalize_timeline(testing_support::random_raw_events(rng, 25, duration), "r",
                                   duration);
    auto twice = normalize_timeline(once.events, "r", duration);
    REQUIRE(once == twice);
    REQUIRE(is_normalized(once));
  }
}

TEST_CASE("property: split preserves coverage and respects the maximum") {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const double duration = rng.uniform(1.0, 30.0);
    const double max = rng.uniform(0.05, 1.0);
    auto t = normalize_timeline(testing_support::random_raw_events(rng, 25, duration), "r",
                                duration);
    auto s = split_long_events(t, max);
    REQUIRE(is_normalized(s));
    REQUIRE(covered_duration(s) == Approx(covered_duration(t)).epsilon(1e-12));
    for (const auto& e : s.events) REQUIRE(e.duration() <= max);
    // Contiguous pieces: every original event is covered from its onset to
    // its offset without gaps.
    std::size_t k = 0;
    for (const auto& e : t.events) {
      REQUIRE(s.events[k].onset == e.onset);
      while (s.events[k].offset < e.offset) {
        REQUIRE(s.events[k + 1].onset == s.events[k].offset);
        ++k;
      }
      REQUIRE(s.events[k].offset == e.offset);
      ++k;
    }
    REQUIRE(k == s.events.size());
  }
}

TEST_CASE("property: zero tolerance is the identity") {
  Rng rng(13);
  ScoringParams p;
  p.tolerance_start = p.tolerance_end = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double onset = rng.uniform(0.0, 100.0);
    const Event e{onset, onset + rng.uniform(1e-6, 2.0)};
    REQUIRE(extend_with_tolerance(e, p) == e);
  }
}

TEST_CASE("merge close events") {
  auto t = normalize_timeline({{1.0, 1.2}, {1.25, 1.5}, {2.0, 2.2}}, "a", 5.0);
  CHECK(merge_close_events(t, 0.1).events == std::vector<Event>{{1.0, 1.5}, {2.0, 2.2}});
  CHECK(merge_close_events(t, 0.0).events == t.events);
}

TEST_CASE("prepare_for_scoring keeps touching pieces of normalized input") {
  EventTimeline t{"a", 5.0, {{1.0, 1.3}, {1.3, 1.6}}};
  ScoringParams p;
  CHECK(prepare_for_scoring(t, p).events == t.events);
  EventTimeline messy{"a", 5.0, {{1.3, 1.5}, {1.0, 1.4}}};
  auto prepared = prepare_for_scoring(messy, p);
  REQUIRE(prepared.events.size() == 1);
  CHECK(prepared.events[0] == Event{1.0, 1.5});
}

TEST_CASE("event csv round trip") {
  std::vector<EventTimeline> timelines = {
      {"a", 5.0, {{0.1, 0.35}, {1.0 / 3.0, 0.5}}},
      {"b,x", 3.0, {{2.0, 2.25}}},
  };
  std::ostringstream out;
  write_event_csv(out, timelines);
  std::istringstream in(out.str());
  auto rows = read_event_csv(in, "mem");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].first == "a");
  CHECK(rows[0].second == timelines[0].events);
  CHECK(rows[1].first == "b,x");
  CHECK(rows[1].second == timelines[1].events);
}

TEST_CASE("event csv rejects malformed rows") {
  std::istringstream bad_header("id,onset,offset\na,1,2\n");
  CHECK_THROWS_AS(read_event_csv(bad_header, "mem"), Error);
  std::istringstream bad_number("recording_id,onset_s,offset_s\na,abc,2\n");
  try {
    read_event_csv(bad_number, "mem");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
}

TEST_CASE("build_timelines pairs rows with durations") {
  EventRows rows = {{"a", {{1.0, 1.5}, {1.5, 2.0}}}};
  std::map<std::string, double> durations = {{"a", 5.0}, {"b", 3.0}};
  auto merged = build_timelines(rows, durations);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].events == std::vector<Event>{{1.0, 2.0}});
  CHECK(merged[1].events.empty());
  auto kept = build_timelines(rows, durations, true);
  CHECK(kept[0].events.size() == 2);

  EventRows unknown = {{"zzz", {{1.0, 1.5}}}};
  try {
    build_timelines(unknown, durations);
    FAIL("expected unknown recording");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownRecording);
  }
}
