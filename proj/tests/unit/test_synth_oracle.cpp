#include <catch_amalgamated.hpp>

#include <cmath>

#include "coughcount/eb_scorer.hpp"
#include "coughcount/error.hpp"
#include "coughcount/oracle.hpp"
#include "coughcount/synth.hpp"
#include "support.hpp"

using namespace coughcount;
using Catch::Approx;

namespace {

double rms(const std::vector<float>& x, std::size_t begin, std::size_t end) {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += static_cast<double>(x[i]) * x[i];
  return std::sqrt(acc / static_cast<double>(end - begin));
}

}  // namespace

TEST_CASE("no events gives pure noise") {
  SynthSpec spec;
  spec.n_events = 0;
  spec.recording_duration = 3.0;
  auto c = gen_synthetic_case(spec);
  CHECK(c.reference.events.empty());
  CHECK(c.audio.duration() == Approx(3.0));
  CHECK(rms(c.audio.samples, 0, c.audio.samples.size()) == Approx(spec.noise_floor).epsilon(0.05));
}

TEST_CASE("one burst of five respects the gap range") {
  SynthSpec spec;
  spec.n_events = 5;
  spec.burst.events_per_burst = {5, 5};
  spec.seed = 4;
  auto c = gen_synthetic_case(spec);
  REQUIRE(c.reference.events.size() == 5);
  for (std::size_t i = 1; i < 5; ++i) {
    const double gap = c.reference.events[i].onset - c.reference.events[i - 1].offset;
    CHECK(gap >= 0.3);
    CHECK(gap <= 0.6);
  }
  for (const auto& e : c.reference.events) {
    CHECK(e.duration() >= 0.3);
    CHECK(e.duration() <= 0.5);
  }
  CHECK(c.reference.duration == c.audio.duration());
}

TEST_CASE("synthesis is deterministic per seed") {
  SynthSpec spec;
  spec.n_events = 8;
  spec.burst.events_per_burst = {2, 4};
  spec.seed = 99;
  auto a = gen_synthetic_case(spec);
  auto b = gen_synthetic_case(spec);
  CHECK(a.reference == b.reference);
  CHECK(a.audio.samples == b.audio.samples);
  spec.seed = 100;
  CHECK(gen_synthetic_case(spec).reference != a.reference);
}

TEST_CASE("events are louder than the floor") {
  SynthSpec spec;
  spec.n_events = 3;
  spec.seed = 7;
  auto c = gen_synthetic_case(spec);
  const double sr = c.audio.sample_rate;
  for (const auto& e : c.reference.events) {
    const auto at = static_cast<std::size_t>(e.onset * sr);
    CHECK(rms(c.audio.samples, at, at + static_cast<std::size_t>(0.04 * sr)) >
          20 * spec.noise_floor);
  }
}

TEST_CASE("infeasible packing is reported") {
  SynthSpec spec;
  spec.n_events = 20;
  spec.recording_duration = 3.0;
  try {
    gen_synthetic_case(spec);
    FAIL("packed 20 events into 3 s");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
  }
}

TEST_CASE("property: synthetic timelines satisfy the invariants") {
  Rng rng(71);
  for (int i = 0; i < 50; ++i) {
    SynthSpec spec;
    spec.n_events = static_cast<int>(rng.integer(0, 30));
    const int lo = static_cast<int>(rng.integer(1, 6));
    spec.burst.events_per_burst = {lo, lo + static_cast<int>(rng.integer(0, 5))};
    spec.sample_rate = 1000.0;
    spec.seed = rng.next_u64();
    auto c = gen_synthetic_case(spec);
    REQUIRE(static_cast<int>(c.reference.events.size()) == spec.n_events);
    REQUIRE(is_normalized(c.reference));
    for (std::size_t k = 1; k < c.reference.events.size(); ++k) {
      REQUIRE(c.reference.events[k].onset > c.reference.events[k - 1].offset);
    }
  }
}

TEST_CASE("perturbation edge cases") {
  SynthSpec spec;
  spec.n_events = 10;
  spec.burst.events_per_burst = {3, 5};
  spec.seed = 2;
  const auto ref = gen_synthetic_case(spec).reference;

  CHECK(perturb_predictions(ref, {}, 5) == ref);
  ErrorModel all_missed;
  all_missed.miss_rate = 1.0;
  CHECK(perturb_predictions(ref, all_missed, 5).events.empty());
}

TEST_CASE("spurious insertions follow the Poisson rate") {
  EventTimeline empty{"r", 1800.0, {}};
  ErrorModel m;
  m.fp_rate_per_hour = 10.0;
  auto a = perturb_predictions(empty, m, 2024);
  CHECK(a == perturb_predictions(empty, m, 2024));
  // Frozen for this seed.
  CHECK(a.events.size() == 6);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    total += static_cast<double>(perturb_predictions(empty, m, seed).events.size());
  }
  CHECK(total / 400.0 == Approx(5.0).margin(0.35));
}

TEST_CASE("jitter within tolerance keeps perfect scores") {
  Rng rng(72);
  for (int i = 0; i < 50; ++i) {
    SynthSpec spec;
    spec.n_events = 12;
    spec.burst.events_per_burst = {1, 6};
    spec.sample_rate = 500.0;
    spec.seed = rng.next_u64();
    const auto ref = gen_synthetic_case(spec).reference;
    ErrorModel m;
    m.onset_jitter = 0.25;
    auto pred = prepare_for_scoring(perturb_predictions(ref, m, rng.next_u64()), {});
    auto c = score_events(prepare_for_scoring(ref, {}), pred, {});
    REQUIRE(c.fn == 0);
    REQUIRE(c.fp == 0);
  }
}

TEST_CASE("oracle reproduces the scorer examples") {
  EventTimeline ref{"r", 10.0, {{1.0, 1.4}}};
  auto c = oracle::brute_force_score(ref, {"r", 10.0, {{1.1, 1.5}}}, {});
  CHECK(c.tp == 1);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);
  c = oracle::brute_force_score(ref, {"r", 10.0, {{1.55, 1.9}}}, {});
  CHECK(c.tp == 1);
  CHECK(c.fp == 0);
}

TEST_CASE("oracle agrees with the scorer on random cases") {
  Rng rng(73);
  const double tolerances[] = {0.0, 0.1, 0.25, 0.5};
  for (int i = 0; i < 300; ++i) {
    ScoringParams p;
    p.tolerance_start = tolerances[rng.index(4)];
    p.tolerance_end = tolerances[rng.index(4)];
    auto ref = testing_support::random_timeline(rng, 10, 20.0, 0.6);
    auto pred = testing_support::random_timeline(rng, 10, 20.0, 0.6);
    REQUIRE(oracle::brute_force_score(ref, pred, p) == score_events(ref, pred, p));
  }
}

TEST_CASE("synthetic corpus layout") {
  SynthCorpusSpec spec;
  spec.cough_recordings = 4;
  spec.cough.n_events = 3;
  spec.cough.sample_rate = 1000.0;
  spec.other_recordings[SoundClass::kBreathing] = 2;
  spec.other_recordings[SoundClass::kSpeech] = 1;
  spec.seed = 3;
  auto corpus = gen_synthetic_corpus(spec);
  REQUIRE(corpus.recordings.size() == 7);
  CHECK(corpus.recordings[3].id == "cough_0003");
  CHECK(corpus.recordings[3].file_path == "audio/cough_0003.wav");
  for (const auto& r : corpus.recordings) {
    if (r.sound_class == SoundClass::kCough) {
      CHECK(r.reference.events.size() == 3);
    } else {
      CHECK(r.reference.events.empty());
      CHECK(r.duration() >= 5.0);
      CHECK(r.duration() <= 15.0 + 1e-3);
    }
  }
  auto again = gen_synthetic_corpus(spec);
  CHECK(again.recordings[5].audio->samples == corpus.recordings[5].audio->samples);
}
