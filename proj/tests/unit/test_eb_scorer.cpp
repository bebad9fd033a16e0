#include <catch_amalgamated.hpp>

#include "coughcount/eb_scorer.hpp"
#include "coughcount/error.hpp"
#include "coughcount/oracle.hpp"
#include "support.hpp"

using namespace coughcount;
using Catch::Approx;

namespace {

EventTimeline tl(std::vector<Event> events, double duration = 10.0) {
  return EventTimeline{"r", duration, std::move(events)};
}

}  // namespace

TEST_CASE("direct overlap is a hit") {
  auto c = score_events(tl({{1.0, 1.4}}), tl({{1.1, 1.5}}), {});
  CHECK(c.tp == 1);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);
  CHECK(c.monitored_duration == 10.0);
}

TEST_CASE("tolerance reaches a late prediction") {
  ScoringParams p;
  auto c = score_events(tl({{1.0, 1.4}}), tl({{1.55, 1.9}}), p);
  CHECK(c.tp == 1);
  CHECK(c.fp == 0);
  // Frozen from the all-pairs oracle.
  CHECK(oracle::brute_force_score(tl({{1.0, 1.4}}), tl({{1.55, 1.9}}), p) == c);

  p.tolerance_end = 0.1;
  c = score_events(tl({{1.0, 1.4}}), tl({{1.55, 1.9}}), p);
  CHECK(c.tp == 0);
  CHECK(c.fp == 1);
  CHECK(c.fn == 1);
}

TEST_CASE("disjoint timelines") {
  auto c = score_events(tl({{1.0, 1.4}, {3.0, 3.4}}), tl({{5.0, 5.3}}), {});
  CHECK(c.tp == 0);
  CHECK(c.fn == 2);
  CHECK(c.fp == 1);
  CHECK(c.n_ref == 2);
  CHECK(c.n_pred == 1);
}

TEST_CASE("many-to-one matches") {
  // Two predictions inside one reference: one TP, no FP.
  auto c = score_events(tl({{1.0, 1.55}}), tl({{1.0, 1.2}, {1.3, 1.5}}), {});
  CHECK(c.tp == 1);
  CHECK(c.fp == 0);
  // One prediction spanning two references: both TP.
  c = score_events(tl({{1.0, 1.3}, {1.5, 1.8}}), tl({{1.2, 1.6}}), {});
  CHECK(c.tp == 2);
  CHECK(c.fp == 0);
}

TEST_CASE("touching extended intervals do not match") {
  ScoringParams p;
  p.tolerance_start = p.tolerance_end = 0.0;
  auto c = score_events(tl({{1.0, 1.5}}), tl({{1.5, 1.8}}), p);
  CHECK(c.tp == 0);
  CHECK(c.fp == 1);
}

TEST_CASE("min_overlap raises the bar") {
  ScoringParams p;
  p.tolerance_start = p.tolerance_end = 0.0;
  p.min_overlap = 0.1;
  CHECK(score_events(tl({{1.0, 1.5}}), tl({{1.45, 1.8}}), p).tp == 0);
  CHECK(score_events(tl({{1.0, 1.5}}), tl({{1.35, 1.8}}), p).tp == 1);
}

TEST_CASE("usage errors") {
  auto code_of = [](const EventTimeline& a, const EventTimeline& b) {
    try {
      score_events(a, b, {});
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EventTimeline other{"other", 10.0, {}};
  CHECK(code_of(tl({}), other) == ErrorCode::kRecordingMismatch);
  CHECK(code_of(tl({}), tl({}, 9.0)) == ErrorCode::kRecordingMismatch);
  CHECK(code_of(tl({{2.0, 2.4}, {1.0, 1.4}}), tl({})) == ErrorCode::kUnnormalized);
  CHECK(code_of(tl({}), tl({{1.0, 1.4}, {1.3, 1.5}})) == ErrorCode::kUnnormalized);
  CHECK(code_of(tl({{1.0, 2.0}}), tl({})) == ErrorCode::kUnnormalized);
}

TEST_CASE("aggregate counts") {
  EventCounts a{1, 0, 0, 1, 1, 10.0};
  EventCounts b{2, 1, 1, 3, 3, 20.0};
  std::vector<EventCounts> both{a, b};
  auto sum = aggregate_counts(both);
  CHECK(sum.tp == 3);
  CHECK(sum.fp == 1);
  CHECK(sum.fn == 1);
  CHECK(sum.monitored_duration == 30.0);

  std::vector<EventCounts> single{b};
  CHECK(aggregate_counts(single) == b);

  std::vector<EventCounts> zeros{{0, 0, 0, 0, 0, 5.0}, {0, 0, 0, 0, 0, 5.0}};
  CHECK(aggregate_counts(zeros) == EventCounts{0, 0, 0, 0, 0, 10.0});

  std::vector<EventCounts> none;
  CHECK_THROWS_AS(aggregate_counts(none), Error);
}

TEST_CASE("event metrics") {
  auto m = eb_metrics({3, 1, 1, 4, 4, 3600.0});
  CHECK(*m.se == Approx(0.75));
  CHECK(*m.pr == Approx(0.75));
  CHECK(*m.f1 == Approx(0.75));
  CHECK(m.fp_per_hr == Approx(1.0));
  CHECK(m.mode == ScoringMode::kEvent);
  CHECK_FALSE(m.tn);
  CHECK_FALSE(m.ac);

  m = eb_metrics({0, 0, 0, 0, 0, 100.0});
  CHECK_FALSE(m.se);
  CHECK_FALSE(m.pr);
  CHECK_FALSE(m.f1);
  CHECK(m.fp_per_hr == 0.0);

  m = eb_metrics({0, 5, 2, 5, 2, 7200.0});
  CHECK(*m.se == 0.0);
  CHECK(*m.pr == 0.0);
  CHECK_FALSE(m.f1);
  CHECK(m.fp_per_hr == Approx(1.0));

  try {
    eb_metrics({0, 0, 1, 0, 1, 0.0});
    FAIL("zero duration accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kZeroDuration);
  }
}

TEST_CASE("property: scoring a timeline against itself is perfect") {
  Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    ScoringParams p;
    p.tolerance_start = rng.uniform(0.0, 0.5);
    p.tolerance_end = rng.uniform(0.0, 0.5);
    auto t = testing_support::random_timeline(rng, 20, 30.0, p.max_event_duration);
    auto c = score_events(t, t, p);
    REQUIRE(c.fn == 0);
    REQUIRE(c.fp == 0);
    REQUIRE(c.tp == static_cast<std::int64_t>(t.events.size()));
  }
}

TEST_CASE("property: counts are consistent and monotone in tolerance") {
  Rng rng(22);
  const double tolerances[] = {0.0, 0.1, 0.25, 0.5};
  for (int i = 0; i < 300; ++i) {
    auto ref = testing_support::random_timeline(rng, 20, 30.0, 0.6);
    auto pred = testing_support::random_timeline(rng, 20, 30.0, 0.6);
    EventCounts prev;
    for (int k = 0; k < 4; ++k) {
      ScoringParams p;
      p.tolerance_start = rng.bernoulli(0.5) ? tolerances[k] : 0.0;
      p.tolerance_end = tolerances[k];
      if (k > 0) p.tolerance_start = std::max(p.tolerance_start, tolerances[k - 1]);
      auto c = score_events(ref, pred, p);
      REQUIRE(c.tp + c.fn == c.n_ref);
      REQUIRE(c.fp <= c.n_pred);
      if (k > 0) {
        REQUIRE(c.tp >= prev.tp);
        REQUIRE(c.fp + c.fn <= prev.fp + prev.fn);
      }
      prev = c;
    }
  }
}

TEST_CASE("property: silent recordings change only FP/hr") {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    auto ref = testing_support::random_timeline(rng, 10, 20.0, 0.6);
    auto pred = testing_support::random_timeline(rng, 10, 20.0, 0.6);
    std::vector<EventCounts> counts{score_events(ref, pred, {})};
    const auto before = eb_metrics(aggregate_counts(counts));
    EventTimeline silent{"r", rng.uniform(1.0, 60.0), {}};
    counts.push_back(score_events(silent, silent, {}));
    const auto after = eb_metrics(aggregate_counts(counts));
    REQUIRE(after.tp == before.tp);
    REQUIRE(after.fp == before.fp);
    REQUIRE(after.fn == before.fn);
    REQUIRE(after.se == before.se);
    REQUIRE(after.pr == before.pr);
    REQUIRE(after.f1 == before.f1);
    if (before.fp > 0) REQUIRE(after.fp_per_hr < before.fp_per_hr);
  }
}
