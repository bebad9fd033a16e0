#pragma once

#include <cstdint>
#include <string>

#include "coughcount/corpus.hpp"
#include "coughcount/events.hpp"
#include "coughcount/segmenter.hpp"
#include "coughcount/wav.hpp"

namespace coughcount {

struct CountRange {
  int lo = 1;
  int hi = 1;
};

struct BurstGeometry {
  CountRange events_per_burst{1, 1};
  // Silence between one event's offset and the next onset.
  SecondsRange intra_gap{0.3, 0.6};
  SecondsRange inter_gap{2.0, 4.0};
};

struct SynthSpec {
  int n_events = 0;
  BurstGeometry burst;
  SecondsRange event_duration{0.3, 0.5};
  SecondsRange lead_in{0.5, 1.5};
  // 0 sizes the recording to the last event plus lead_in.hi.
  double recording_duration = 0.0;
  double noise_floor = 0.005;   // RMS of the background noise
  double burst_amplitude = 0.5; // RMS at the attack
  double sample_rate = 8000.0;
  std::uint64_t seed = 0;
  std::string recording_id = "synth";
};

struct SynthCase {
  EventTimeline reference;
  Audio audio;
};

// Places bursts of events with seeded gaps and renders each event as a
// 0.04 s full-amplitude attack followed by exponential decay to the noise
// floor at the event's offset. Throws kInfeasible when the events do not fit.
SynthCase gen_synthetic_case(const SynthSpec& spec);

struct ErrorModel {
  double miss_rate = 0.0;
  double fp_rate_per_hour = 0.0;
  double onset_jitter = 0.0;       // max absolute shift, seconds
  double spurious_duration = 0.3;  // length of inserted false events
};

// Drops each reference event with probability miss_rate, shifts survivors by
// a uniform draw in [-onset_jitter, onset_jitter], inserts spurious events as
// a Poisson process and returns the normalized result.
EventTimeline perturb_predictions(const EventTimeline& reference,
                                  const ErrorModel& error_model, std::uint64_t seed);

// Non-cough texture for synthetic corpora: steady noise (background),
// slow swells (breathing), short harsh bursts (throat-clearing, laughter,
// other-noise) or syllable-rate modulation (speech).
Audio gen_texture(SoundClass sound_class, double duration, double sample_rate,
                  double noise_floor, std::uint64_t seed);

struct SynthCorpusSpec {
  int cough_recordings = 10;
  SynthSpec cough;  // recording_id and seed are overridden per recording
  // Count and duration range of non-cough recordings per class.
  std::map<SoundClass, int> other_recordings;
  SecondsRange other_duration{5.0, 15.0};
  std::uint64_t seed = 0;
};

// In-memory corpus with ids like `cough_0003` and files under `audio/`.
Corpus gen_synthetic_corpus(const SynthCorpusSpec& spec);

}  // namespace coughcount
