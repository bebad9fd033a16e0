#include "coughcount/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "coughcount/error.hpp"
#include "coughcount/rng.hpp"

namespace coughcount {

namespace {

constexpr double kAttack = 0.04;
const double kUnitNoise = std::sqrt(3.0);  // uniform(-1, 1) scaled to unit RMS

double draw(Rng& rng, const SecondsRange& r) { return rng.uniform(r.lo, r.hi); }

bool valid(const SecondsRange& r) {
  return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo >= 0 && r.lo <= r.hi;
}

std::vector<float> noise(Rng& rng, std::size_t n, double rms) {
  std::vector<float> out(n);
  for (auto& s : out) s = static_cast<float>(rms * kUnitNoise * rng.uniform(-1.0, 1.0));
  return out;
}

// Attack at full amplitude, then exponential decay reaching `floor` at the
// end of the event.
void add_burst(std::vector<float>& samples, double sample_rate, const Event& e,
               double amplitude, double floor, Rng& rng) {
  const double tail = e.duration() - kAttack;
  const double end_level = std::max(floor, amplitude * 1e-3);
  const double decay = tail > 0 ? std::log(amplitude / end_level) / tail : 0.0;
  const auto begin = static_cast<std::size_t>(std::lround(e.onset * sample_rate));
  const auto end = std::min(samples.size(),
                            static_cast<std::size_t>(std::lround(e.offset * sample_rate)));
  for (std::size_t i = begin; i < end; ++i) {
    const double t = static_cast<double>(i) / sample_rate - e.onset;
    const double level = t < kAttack ? amplitude : amplitude * std::exp(-decay * (t - kAttack));
    samples[i] += static_cast<float>(level * kUnitNoise * rng.uniform(-1.0, 1.0));
  }
}

}  // namespace

SynthCase gen_synthetic_case(const SynthSpec& spec) {
  if (spec.n_events < 0 || spec.burst.events_per_burst.lo < 1 ||
      spec.burst.events_per_burst.hi < spec.burst.events_per_burst.lo ||
      !valid(spec.burst.intra_gap) || !valid(spec.burst.inter_gap) ||
      !valid(spec.event_duration) || !valid(spec.lead_in) ||
      !(spec.event_duration.lo > 0) || !(spec.sample_rate > 0) ||
      spec.recording_duration < 0 || spec.noise_floor < 0 || spec.burst_amplitude < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synthetic spec");
  }
  Rng rng(spec.seed);
  std::vector<Event> events;
  double t = draw(rng, spec.lead_in);
  int remaining = spec.n_events;
  while (remaining > 0) {
    const int size = std::min<int>(
        remaining, static_cast<int>(rng.integer(spec.burst.events_per_burst.lo,
                                                spec.burst.events_per_burst.hi)));
    for (int k = 0; k < size; ++k) {
      const double d = draw(rng, spec.event_duration);
      events.push_back({t, t + d});
      t += d + (k + 1 < size ? draw(rng, spec.burst.intra_gap) : 0.0);
    }
    remaining -= size;
    if (remaining > 0) t += draw(rng, spec.burst.inter_gap);
  }

  const double last = events.empty() ? 0.0 : events.back().offset;
  double duration = spec.recording_duration;
  if (duration == 0) duration = std::max(last, t) + spec.lead_in.hi;
  if (last > duration) {
    throw Error(ErrorCode::kInfeasible,
                "synthetic case '" + spec.recording_id + "': " +
                    std::to_string(spec.n_events) + " events need " +
                    std::to_string(last) + " s but the recording is " +
                    std::to_string(duration) + " s");
  }
  // Snap to whole samples so the timeline and the audio agree exactly.
  const auto n_samples = static_cast<std::size_t>(std::lround(duration * spec.sample_rate));
  duration = static_cast<double>(n_samples) / spec.sample_rate;

  SynthCase out;
  out.audio.sample_rate = spec.sample_rate;
  out.audio.samples = noise(rng, n_samples, spec.noise_floor);
  for (const auto& e : events) {
    add_burst(out.audio.samples, spec.sample_rate, e, spec.burst_amplitude,
              spec.noise_floor, rng);
  }
  out.reference = normalize_timeline(std::move(events), spec.recording_id, duration);
  return out;
}

EventTimeline perturb_predictions(const EventTimeline& reference,
                                  const ErrorModel& model, std::uint64_t seed) {
  if (!(model.miss_rate >= 0 && model.miss_rate <= 1) || model.fp_rate_per_hour < 0 ||
      model.onset_jitter < 0 || !(model.spurious_duration > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid error model");
  }
  Rng rng(seed);
  const double duration = reference.duration;
  std::vector<Event> out;
  for (const auto& e : reference.events) {
    if (rng.bernoulli(model.miss_rate)) continue;
    const double shift = rng.uniform(-model.onset_jitter, model.onset_jitter);
    const Event moved{std::max(0.0, e.onset + shift), std::min(duration, e.offset + shift)};
    if (moved.offset > moved.onset && moved.onset < duration) out.push_back(moved);
  }
  if (model.fp_rate_per_hour > 0) {
    const double rate = model.fp_rate_per_hour / 3600.0;
    for (double t = rng.exponential(rate); t < duration; t += rng.exponential(rate)) {
      out.push_back({t, std::min(duration, t + model.spurious_duration)});
    }
  }
  return normalize_timeline(std::move(out), reference.recording_id, duration);
}

Audio gen_texture(SoundClass sound_class, double duration, double sample_rate,
                  double noise_floor, std::uint64_t seed) {
  if (!(duration > 0) || !(sample_rate > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "gen_texture: duration and rate must be positive");
  }
  Rng rng(seed);
  Audio audio;
  audio.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(std::lround(duration * sample_rate));
  audio.samples = noise(rng, n, noise_floor);
  const double two_pi = 2.0 * std::numbers::pi;

  auto modulate = [&](double amplitude, auto&& gain) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      audio.samples[i] += static_cast<float>(amplitude * gain(t) * kUnitNoise *
                                             rng.uniform(-1.0, 1.0));
    }
  };
  auto scatter = [&](double rate_hz, SecondsRange dur, double amplitude) {
    for (double t = rng.exponential(rate_hz); t < duration; t += rng.exponential(rate_hz)) {
      const double d = draw(rng, dur);
      add_burst(audio.samples, sample_rate, {t, std::min(duration, t + d)}, amplitude,
                noise_floor, rng);
      t += d;
    }
  };

  switch (sound_class) {
    case SoundClass::kCough:
    case SoundClass::kBackground:
      break;
    case SoundClass::kBreathing: {
      const double period = rng.uniform(3.0, 5.0);
      modulate(6.0 * noise_floor, [&](double t) {
        const double s = std::sin(two_pi * t / period);
        return s * s;
      });
      break;
    }
    case SoundClass::kSpeech: {
      const double syllable = rng.uniform(4.0, 6.0);
      modulate(0.08, [&](double t) {
        const double s = std::sin(two_pi * t * syllable / 2.0);
        return s * s * (0.5 + 0.5 * std::sin(two_pi * t * 0.3));
      });
      break;
    }
    case SoundClass::kThroatClearing:
      scatter(0.4, {0.3, 0.6}, 0.25);
      break;
    case SoundClass::kLaughter:
      scatter(2.0, {0.1, 0.2}, 0.15);
      break;
    case SoundClass::kOtherNoise:
      scatter(0.5, {0.05, 0.5}, 0.2);
      break;
  }
  return audio;
}

Corpus gen_synthetic_corpus(const SynthCorpusSpec& spec) {
  Corpus corpus;
  char name[64];
  std::uint64_t stream = 0;
  for (int i = 0; i < spec.cough_recordings; ++i) {
    SynthSpec s = spec.cough;
    std::snprintf(name, sizeof(name), "cough_%04d", i);
    s.recording_id = name;
    s.seed = derive_seed(spec.seed, stream++);
    auto c = gen_synthetic_case(s);
    Recording r;
    r.id = name;
    r.file_path = std::string("audio/") + name + ".wav";
    r.sound_class = SoundClass::kCough;
    std::snprintf(name, sizeof(name), "subject_%02d", i % 10);
    r.subject_id = name;
    r.audio = std::make_shared<const Audio>(std::move(c.audio));
    r.reference = std::move(c.reference);
    corpus.recordings.push_back(std::move(r));
  }
  for (const auto& [cls, count] : spec.other_recordings) {
    for (int i = 0; i < count; ++i) {
      const std::uint64_t seed = derive_seed(spec.seed, stream++);
      Rng rng(seed);
      double duration = draw(rng, spec.other_duration);
      duration = std::round(duration * spec.cough.sample_rate) / spec.cough.sample_rate;
      std::string id = to_string(cls);
      for (auto& ch : id) {
        if (ch == '-') ch = '_';
      }
      std::snprintf(name, sizeof(name), "_%04d", i);
      id += name;
      Recording r;
      r.id = id;
      r.file_path = "audio/" + id + ".wav";
      r.sound_class = cls;
      std::snprintf(name, sizeof(name), "subject_%02d", i % 10);
      r.subject_id = name;
      r.audio = std::make_shared<const Audio>(gen_texture(
          cls, duration, spec.cough.sample_rate, spec.cough.noise_floor, derive_seed(seed, 1)));
      r.reference = EventTimeline{id, r.audio->duration(), {}};
      corpus.recordings.push_back(std::move(r));
    }
  }
  return corpus;
}

}  // namespace coughcount
