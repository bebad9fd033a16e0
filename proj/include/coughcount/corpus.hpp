#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coughcount/events.hpp"
#include "coughcount/sb_scorer.hpp"
#include "coughcount/wav.hpp"

namespace coughcount {

enum class SoundClass {
  kCough,
  kBackground,  // silence or background noise
  kBreathing,
  kThroatClearing,
  kSpeech,
  kLaughter,
  kOtherNoise,
};

inline constexpr std::array<SoundClass, 7> kAllSoundClasses = {
    SoundClass::kCough,          SoundClass::kBackground, SoundClass::kBreathing,
    SoundClass::kThroatClearing, SoundClass::kSpeech,     SoundClass::kLaughter,
    SoundClass::kOtherNoise};

const char* to_string(SoundClass c);
// Accepts the canonical names plus "silence" and underscore spellings.
SoundClass parse_sound_class(std::string_view name);

struct Recording {
  std::string id;
  std::string file_path;  // relative to the corpus root
  SoundClass sound_class = SoundClass::kBackground;
  std::string subject_id;
  // Shared so scenario subsets do not copy audio.
  std::shared_ptr<const Audio> audio;
  // Empty for non-cough recordings.
  EventTimeline reference;

  double duration() const { return audio->duration(); }
};

struct Corpus {
  std::vector<Recording> recordings;

  const Recording* find(const std::string& id) const;
};

// Manifest CSV `recording_id,file_path,sound_class,subject_id` with file
// paths relative to `root`; annotations use the event-list CSV. Reads WAV
// files on up to `jobs` threads.
Corpus load_corpus(const std::filesystem::path& root,
                   const std::filesystem::path& annotations_path,
                   const std::filesystem::path& manifest_path, unsigned jobs = 1);

// `root/manifest.csv` and `root/annotations.csv`.
Corpus load_corpus(const std::filesystem::path& root, unsigned jobs = 1);

// Writes manifest.csv, annotations.csv and every recording's WAV under root.
void write_corpus(const std::filesystem::path& root, const Corpus& corpus,
                  WavEncoding encoding = WavEncoding::kFloat32);

void write_manifest(const std::filesystem::path& path, const Corpus& corpus);

// 64-bit FNV-1a over the manifest, annotations and audio bytes, as hex.
std::string hash_corpus_files(const std::filesystem::path& root,
                              const std::filesystem::path& annotations_path,
                              const std::filesystem::path& manifest_path);

// Window starts only (score 0, decision false); hop = length * (1 - overlap).
WindowSeries cut_windows(const Recording& recording, double window_length,
                         double overlap_fraction);

struct ScenarioSpec {
  std::string name;
  // Share of segmented windows per class. Empty keeps the corpus unchanged.
  std::map<SoundClass, double> target_fractions;
  double tolerance = 0.01;
  std::uint64_t seed = 0;

  void validate() const;
};

// JSON: {"name", "seed", "tolerance", "target_fractions": {class: share}}.
ScenarioSpec load_scenario_spec(const std::filesystem::path& path);

struct ScenarioResult {
  Corpus subset;
  std::map<SoundClass, std::size_t> windows;
  std::map<SoundClass, double> achieved_fractions;
  std::vector<std::string> removed_ids;
  bool reached = true;
  std::string diagnostic;  // set when a target could not be met
};

std::map<SoundClass, std::size_t> count_windows(const Corpus& corpus,
                                                double window_length);

// Keeps every cough recording and removes non-cough recordings by seeded
// uniform draws, class by class, until each class's window share is within
// spec.tolerance of its target. Unreachable targets are reported in the
// result (and warned about), never thrown.
ScenarioResult build_scenario(const Corpus& corpus, const ScenarioSpec& spec,
                              double window_length);

}  // namespace coughcount
