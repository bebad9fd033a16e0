#include "coughcount/harness.hpp"

#include <cmath>
#include <map>

#include "coughcount/csv.hpp"
#include "coughcount/eb_scorer.hpp"
#include "coughcount/error.hpp"
#include "coughcount/parallel.hpp"
#include "coughcount/sb_scorer.hpp"

namespace coughcount {

namespace {

using PredictionTable = std::map<std::string, WindowSeries>;

std::string predictions_path_for(const std::string& pattern, double window_length) {
  const std::string key = "{length}";
  std::string path = pattern;
  const auto pos = path.find(key);
  if (pos != std::string::npos) path.replace(pos, key.size(), csv::format_double(window_length));
  return path;
}

PredictionTable load_table(const Corpus& corpus, const ExperimentParams& params) {
  PredictionTable table;
  if (params.detector.kind != DetectorKind::kPredictions) return table;
  auto series = load_window_predictions(
      predictions_path_for(params.detector.predictions_path, params.window_length), &corpus,
      WindowGrid{params.window_length, 0.5});
  for (auto& s : series) table.emplace(s.recording_id, std::move(s));
  return table;
}

// Every other window of a 50%-overlap grid is the non-overlapping grid.
WindowSeries decimate(const WindowSeries& half_overlap) {
  WindowSeries out = half_overlap;
  out.hop = 2.0 * half_overlap.hop;
  out.windows.clear();
  for (std::size_t k = 0; k < half_overlap.windows.size(); k += 2) {
    out.windows.push_back(half_overlap.windows[k]);
  }
  return out;
}

WindowSeries reference_decisions(const Recording& rec, double window_length, double hop) {
  WindowSeries s = cut_windows(rec, window_length, 1.0 - hop / window_length);
  s.hop = hop;
  const auto labels = label_windows(rec.reference, window_length, hop);
  for (std::size_t k = 0; k < s.windows.size(); ++k) {
    s.windows[k].start = static_cast<double>(k) * hop;
    s.windows[k].decision = labels[k];
    s.windows[k].score = labels[k] ? 1.0 : 0.0;
  }
  return s;
}

struct RecordingResult {
  WindowSeries sb_series;
  std::vector<bool> sb_labels;
  RecordingRow row;
};

RecordingResult evaluate_one(const Recording& rec, const ExperimentParams& params,
                             const PredictionTable& table) {
  const double length = params.window_length;
  RecordingResult out;
  WindowSeries half;
  switch (params.detector.kind) {
    case DetectorKind::kBaseline: {
      BaselineConfig cfg = params.detector.baseline;
      cfg.window_length = length;
      cfg.overlap_fraction = 0.0;
      out.sb_series = classify_windows(rec, cfg);
      cfg.overlap_fraction = 0.5;
      half = classify_windows(rec, cfg);
      break;
    }
    case DetectorKind::kPredictions: {
      auto it = table.find(rec.id);
      if (it == table.end()) {
        throw Error(ErrorCode::kUnknownRecording,
                    "no window predictions for recording '" + rec.id + "'");
      }
      half = it->second;
      out.sb_series = decimate(half);
      break;
    }
    case DetectorKind::kReference:
      out.sb_series = reference_decisions(rec, length, length);
      break;
  }

  out.sb_labels = label_windows(rec.reference, length, length);
  out.row.recording_id = rec.id;
  out.row.sound_class = rec.sound_class;
  out.row.sb = confusion_counts(out.sb_series, out.sb_labels);

  const auto reference = prepare_for_scoring(rec.reference, params.scoring);
  EventTimeline predicted;
  if (params.detector.kind == DetectorKind::kReference) {
    predicted = reference;
  } else {
    predicted = prepare_for_scoring(segment_events(*rec.audio, half, params.segmenter),
                                    params.scoring);
  }
  out.row.eb = score_events(reference, predicted, params.scoring);
  return out;
}

ScenarioReport evaluate_with_table(const Corpus& recordings, const ExperimentParams& params,
                                   const PredictionTable& table) {
  if (recordings.recordings.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no recordings to evaluate");
  }
  std::vector<RecordingResult> results(recordings.recordings.size());
  parallel_for(results.size(), params.jobs, [&](std::size_t i) {
    results[i] = evaluate_one(recordings.recordings[i], params, table);
  });

  ScenarioReport report;
  report.n_recordings = results.size();
  std::vector<WindowSeries> series;
  std::vector<std::vector<bool>> labels;
  std::vector<EventCounts> eb;
  for (auto& r : results) {
    series.push_back(std::move(r.sb_series));
    labels.push_back(std::move(r.sb_labels));
    eb.push_back(r.row.eb);
    report.per_recording.push_back(std::move(r.row));
  }
  report.sb = sb_report(series, labels);
  report.eb = eb_metrics(aggregate_counts(eb));
  return report;
}

}  // namespace

const char* to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kBaseline: return "baseline";
    case DetectorKind::kPredictions: return "predictions";
    case DetectorKind::kReference: return "reference";
  }
  return "unknown";
}

std::vector<double> default_sweep_lengths() {
  std::vector<double> out;
  for (int tenths = 4; tenths <= 10; ++tenths) out.push_back(tenths / 10.0);
  return out;
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(values.size()));
}

ScenarioReport evaluate_recordings(const Corpus& recordings, const ExperimentParams& params) {
  return evaluate_with_table(recordings, params, load_table(recordings, params));
}

ExperimentReport run_scenario_experiment(const Corpus& corpus,
                                         std::span<const ScenarioSpec> scenarios,
                                         const ExperimentParams& params) {
  if (scenarios.empty()) throw Error(ErrorCode::kEmptyInput, "no scenarios given");
  params.scoring.validate();
  params.segmenter.validate();
  const auto table = load_table(corpus, params);

  ExperimentReport report;
  report.provenance.params = params;
  report.provenance.scenarios.assign(scenarios.begin(), scenarios.end());
  for (const auto& spec : scenarios) {
    const auto subset = build_scenario(corpus, spec, params.window_length);
    auto scenario = evaluate_with_table(subset.subset, params, table);
    scenario.spec = spec;
    scenario.windows = subset.windows;
    scenario.achieved_fractions = subset.achieved_fractions;
    scenario.target_reached = subset.reached;
    scenario.diagnostic = subset.diagnostic;
    report.scenarios.push_back(std::move(scenario));
  }
  return report;
}

ExperimentReport run_scenario_experiment(const std::filesystem::path& corpus_root,
                                         std::span<const ScenarioSpec> scenarios,
                                         const ExperimentParams& params) {
  const auto corpus = load_corpus(corpus_root, params.jobs);
  auto report = run_scenario_experiment(corpus, scenarios, params);
  report.provenance.corpus_hash = hash_corpus_files(
      corpus_root, corpus_root / "annotations.csv", corpus_root / "manifest.csv");
  return report;
}

SweepReport run_window_sweep(const Corpus& corpus, std::span<const double> lengths,
                             const ExperimentParams& params) {
  SweepReport sweep;
  std::vector<double> sb_tp;
  std::vector<double> eb_tp;
  for (double length : lengths) {
    if (!(length > 0)) {
      throw Error(ErrorCode::kInvalidArgument, "sweep window lengths must be positive");
    }
    ExperimentParams p = params;
    p.window_length = length;
    const auto report = evaluate_recordings(corpus, p);
    sweep.rows.push_back({length, report.sb.tp, report.eb.tp});
    sweep.true_events = report.eb.tp + report.eb.fn;
    sb_tp.push_back(static_cast<double>(report.sb.tp));
    eb_tp.push_back(static_cast<double>(report.eb.tp));
  }
  sweep.sb_tp_std = population_std(sb_tp);
  sweep.eb_tp_std = population_std(eb_tp);
  return sweep;
}

}  // namespace coughcount
