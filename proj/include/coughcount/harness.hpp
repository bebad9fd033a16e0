#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coughcount/baseline.hpp"
#include "coughcount/corpus.hpp"
#include "coughcount/events.hpp"
#include "coughcount/metrics.hpp"
#include "coughcount/segmenter.hpp"

namespace coughcount {

inline constexpr const char* kToolVersion = "0.1.0";

enum class DetectorKind {
  kBaseline,     // built-in energy + crest classifier
  kPredictions,  // window predictions CSV on the 50%-overlap grid
  kReference,    // ground truth fed back as the prediction (sanity check)
};

const char* to_string(DetectorKind kind);

struct DetectorChoice {
  DetectorKind kind = DetectorKind::kBaseline;
  BaselineConfig baseline;
  // For sweeps the path may contain "{length}", replaced by the window
  // length in seconds (e.g. preds_0.4.csv).
  std::string predictions_path;
};

struct ExperimentParams {
  double window_length = 0.8;
  ScoringParams scoring;
  SegmenterConfig segmenter;
  DetectorChoice detector;
  unsigned jobs = 1;
};

struct RecordingRow {
  std::string recording_id;
  SoundClass sound_class = SoundClass::kBackground;
  ConfusionCounts sb;
  EventCounts eb;
};

struct ScenarioReport {
  ScenarioSpec spec;
  std::size_t n_recordings = 0;
  std::map<SoundClass, std::size_t> windows;
  std::map<SoundClass, double> achieved_fractions;
  bool target_reached = true;
  std::string diagnostic;
  // Counts are summed over recordings before metrics are computed.
  MetricReport sb;
  MetricReport eb;
  std::vector<RecordingRow> per_recording;
};

struct SweepRow {
  double window_length = 0.0;
  std::int64_t sb_tp = 0;  // true-positive windows
  std::int64_t eb_tp = 0;  // true-positive events
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::int64_t true_events = 0;
  // Population standard deviation of TP across window lengths.
  double sb_tp_std = 0.0;
  double eb_tp_std = 0.0;
};

struct Provenance {
  std::string corpus_hash;  // empty when the corpus did not come from files
  ExperimentParams params;
  std::vector<ScenarioSpec> scenarios;
  std::vector<double> sweep_lengths;
};

struct ExperimentReport {
  std::vector<ScenarioReport> scenarios;
  std::optional<SweepReport> sweep;
  Provenance provenance;
};

// 0.4 s to 1.0 s in 0.1 s steps.
std::vector<double> default_sweep_lengths();

// Scores one (already selected) set of recordings in both modes.
ScenarioReport evaluate_recordings(const Corpus& recordings, const ExperimentParams& params);

// For each scenario: build the subset, classify windows, score SB on
// non-overlapping windows, segment events from 50%-overlap decisions and
// score EB.
ExperimentReport run_scenario_experiment(const Corpus& corpus,
                                         std::span<const ScenarioSpec> scenarios,
                                         const ExperimentParams& params);

ExperimentReport run_scenario_experiment(const std::filesystem::path& corpus_root,
                                         std::span<const ScenarioSpec> scenarios,
                                         const ExperimentParams& params);

// TP counts per mode for each window length over the whole corpus.
SweepReport run_window_sweep(const Corpus& corpus, std::span<const double> lengths,
                             const ExperimentParams& params);

double population_std(std::span<const double> values);

}  // namespace coughcount
