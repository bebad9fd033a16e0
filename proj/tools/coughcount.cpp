// coughcount: command-line front end for the scoring toolkit.
//
// Every flag can also be set through an environment variable named
// COUGHCOUNT_<FLAG> (upper case, dashes as underscores), e.g.
// COUGHCOUNT_SEED=7 or COUGHCOUNT_JOBS=4. Flags on the command line win.
//
// Exit status: 0 success, 1 validation failure, 2 I/O failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coughcount/baseline.hpp"
#include "coughcount/corpus.hpp"
#include "coughcount/csv.hpp"
#include "coughcount/eb_scorer.hpp"
#include "coughcount/error.hpp"
#include "coughcount/harness.hpp"
#include "coughcount/report.hpp"
#include "coughcount/sb_scorer.hpp"
#include "coughcount/segmenter.hpp"
#include "coughcount/synth.hpp"

namespace fs = std::filesystem;
using namespace coughcount;

namespace {

constexpr const char* kEnvPrefix = "COUGHCOUNT_";

std::string env_name(const std::string& flag) {
  std::string out = kEnvPrefix;
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return out;
}

template <typename T>
CLI::Option* add(CLI::App* app, const std::string& flag, T& target, const std::string& help) {
  return app->add_option("--" + flag, target, help)->envname(env_name(flag));
}

struct Common {
  std::string corpus;
  std::string predictions;
  std::string out;
  std::vector<std::string> formats;
  double window_length = 0.8;
  double tolerance = 0.25;
  double max_event_duration = 0.6;
  unsigned jobs = 1;
};

void add_scoring_flags(CLI::App* app, Common& c) {
  add(app, "tolerance", c.tolerance, "Start/end tolerance in seconds")
      ->capture_default_str();
  add(app, "max-event-duration", c.max_event_duration,
      "Events longer than this are split before scoring")
      ->capture_default_str();
}

void add_format_flag(CLI::App* app, Common& c) {
  add(app, "format", c.formats, "Output format: json, csv or svg (repeatable)")
      ->check(CLI::IsMember({"json", "csv", "svg"}));
}

ScoringParams scoring_params(const Common& c) {
  ScoringParams p;
  p.tolerance_start = c.tolerance;
  p.tolerance_end = c.tolerance;
  p.max_event_duration = c.max_event_duration;
  p.validate();
  return p;
}

std::set<ReportFormat> formats_of(const Common& c, std::set<ReportFormat> fallback) {
  if (c.formats.empty()) return fallback;
  std::set<ReportFormat> out;
  for (const auto& f : c.formats) out.insert(parse_report_format(f));
  return out;
}

// Writes to `path`, or stdout when path is empty or "-".
void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

std::map<std::string, double> read_durations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open durations file " + path);
  std::map<std::string, double> out;
  for (const auto& row : csv::read(in, {"recording_id", "duration_s"}, path)) {
    const auto where = path + ":" + std::to_string(row.line);
    out[row.fields[0]] = csv::parse_double(row.fields[1], where);
  }
  return out;
}

std::string metrics_text(const MetricReport& report, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    return std::string(kMetricCsvHeader) + "\n" + metric_report_csv_row(report, "all") + "\n";
  }
  return metric_report_json(report, "all");
}

ReportFormat single_format(const Common& c) {
  if (c.formats.empty()) return ReportFormat::kJson;
  if (c.formats.size() > 1) {
    throw Error(ErrorCode::kInvalidArgument, "this command takes a single --format");
  }
  auto f = parse_report_format(c.formats.front());
  if (f == ReportFormat::kSvg) {
    throw Error(ErrorCode::kInvalidArgument, "svg output needs run-experiment or sweep");
  }
  return f;
}

// --- score-events ---------------------------------------------------------

struct ScoreEventsArgs {
  Common common;
  std::string reference;
  std::string durations;
  bool per_recording = false;
};

int score_events_cmd(const ScoreEventsArgs& a) {
  const auto params = scoring_params(a.common);
  std::vector<EventTimeline> reference;
  std::map<std::string, double> durations;
  if (!a.common.corpus.empty()) {
    const auto corpus = load_corpus(a.common.corpus, a.common.jobs);
    for (const auto& rec : corpus.recordings) {
      durations[rec.id] = rec.duration();
      reference.push_back(rec.reference);
    }
  } else {
    if (a.reference.empty() || a.durations.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "score-events needs --corpus or both --reference and --durations");
    }
    durations = read_durations(a.durations);
    reference = build_timelines(read_event_csv_file(a.reference), durations);
  }
  const auto predicted =
      build_timelines(read_event_csv_file(a.common.predictions), durations, true);

  std::map<std::string, const EventTimeline*> by_id;
  for (const auto& t : predicted) by_id[t.recording_id] = &t;
  std::vector<EventCounts> counts;
  std::string rows = "recording_id,tp,fp,fn,duration_s\n";
  for (const auto& ref : reference) {
    const auto r = prepare_for_scoring(ref, params);
    const auto p = prepare_for_scoring(*by_id.at(ref.recording_id), params);
    counts.push_back(score_events(r, p, params));
    const auto& c = counts.back();
    rows += csv::escape(ref.recording_id) + "," + std::to_string(c.tp) + "," +
            std::to_string(c.fp) + "," + std::to_string(c.fn) + "," +
            csv::format_double(c.monitored_duration) + "\n";
  }
  const auto report = eb_metrics(aggregate_counts(counts));
  write_text(a.common.out, a.per_recording ? rows : metrics_text(report, single_format(a.common)));
  return 0;
}

// --- score-samples --------------------------------------------------------

struct ScoreSamplesArgs {
  Common common;
  double overlap = 0.0;
};

int score_samples_cmd(const ScoreSamplesArgs& a) {
  const auto corpus = load_corpus(a.common.corpus, a.common.jobs);
  const WindowGrid grid{a.common.window_length, a.overlap};
  const auto series = load_window_predictions(a.common.predictions, &corpus, grid);
  std::map<std::string, const WindowSeries*> by_id;
  for (const auto& s : series) by_id[s.recording_id] = &s;

  std::vector<WindowSeries> ordered;
  std::vector<std::vector<bool>> labels;
  for (const auto& rec : corpus.recordings) {
    auto it = by_id.find(rec.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kUnknownRecording, "no window predictions for '" + rec.id + "'");
    }
    ordered.push_back(*it->second);
    labels.push_back(label_windows(rec.reference, grid.window_length, grid.hop()));
  }
  write_text(a.common.out, metrics_text(sb_report(ordered, labels), single_format(a.common)));
  return 0;
}

// --- segment --------------------------------------------------------------

int segment_cmd(const Common& c) {
  const auto corpus = load_corpus(c.corpus, c.jobs);
  const auto series =
      load_window_predictions(c.predictions, &corpus, WindowGrid{c.window_length, 0.5});
  const SegmenterConfig config;
  std::vector<EventTimeline> out;
  for (const auto& s : series) {
    const auto* rec = corpus.find(s.recording_id);
    out.push_back(segment_events(*rec->audio, s, config));
  }
  std::ostringstream os;
  write_event_csv(os, out);
  write_text(c.out, os.str());
  return 0;
}

// --- build-scenario -------------------------------------------------------

struct ScenarioArgs {
  Common common;
  std::string scenario;
  std::optional<std::uint64_t> seed;
};

int build_scenario_cmd(const ScenarioArgs& a) {
  const fs::path root = a.common.corpus;
  const auto corpus = load_corpus(root, a.common.jobs);
  auto spec = load_scenario_spec(a.scenario);
  if (a.seed) spec.seed = *a.seed;
  const auto result = build_scenario(corpus, spec, a.common.window_length);

  if (a.common.out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "build-scenario needs --out <dir>");
  }
  const fs::path out = a.common.out;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out.string());

  // The subset points back at the original audio so it loads as a corpus.
  Corpus subset = result.subset;
  std::vector<EventTimeline> annotations;
  for (auto& rec : subset.recordings) {
    const auto audio = fs::absolute(root / rec.file_path);
    rec.file_path = fs::relative(audio, fs::absolute(out)).generic_string();
    if (rec.sound_class == SoundClass::kCough) annotations.push_back(rec.reference);
  }
  write_manifest(out / "manifest.csv", subset);
  write_event_csv_file((out / "annotations.csv").string(), annotations);

  std::ostringstream summary;
  summary << "scenario " << spec.name << ": " << subset.recordings.size() << " recordings, "
          << result.removed_ids.size() << " removed"
          << (result.reached ? "" : " (target not reached: " + result.diagnostic + ")") << "\n";
  for (const auto& [cls, n] : result.windows) {
    summary << "  " << to_string(cls) << ": " << n << " windows, share "
            << csv::format_double(result.achieved_fractions.at(cls)) << "\n";
  }
  std::cout << summary.str();
  return 0;
}

// --- run-experiment / sweep -----------------------------------------------

struct ExperimentArgs {
  Common common;
  std::vector<std::string> scenarios;
  std::optional<std::uint64_t> seed;
  std::string detector = "baseline";
  bool sweep = false;
  std::vector<double> lengths;
};

ExperimentParams experiment_params(const ExperimentArgs& a) {
  ExperimentParams p;
  p.window_length = a.common.window_length;
  p.scoring = scoring_params(a.common);
  p.jobs = a.common.jobs;
  if (!a.common.predictions.empty()) {
    p.detector.kind = DetectorKind::kPredictions;
    p.detector.predictions_path = a.common.predictions;
  } else if (a.detector == "reference") {
    p.detector.kind = DetectorKind::kReference;
  } else {
    p.detector.kind = DetectorKind::kBaseline;
  }
  return p;
}

void require_out(const Common& c, const char* verb) {
  if (c.out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(verb) + " needs --out <dir>");
  }
}

int run_experiment_cmd(const ExperimentArgs& a) {
  require_out(a.common, "run-experiment");
  const auto params = experiment_params(a);
  std::vector<ScenarioSpec> specs;
  for (const auto& path : a.scenarios) {
    specs.push_back(load_scenario_spec(path));
    if (a.seed) specs.back().seed = *a.seed;
  }
  if (specs.empty()) {
    ScenarioSpec whole;
    whole.name = "Whole";
    whole.seed = a.seed.value_or(0);
    specs.push_back(whole);
  }
  auto report = run_scenario_experiment(fs::path(a.common.corpus), specs, params);
  if (a.sweep) {
    const auto lengths = a.lengths.empty() ? default_sweep_lengths() : a.lengths;
    const auto corpus = load_corpus(a.common.corpus, a.common.jobs);
    report.sweep = run_window_sweep(corpus, lengths, params);
    report.provenance.sweep_lengths = lengths;
  }
  const auto files = emit_report(
      report, a.common.out,
      formats_of(a.common, {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kSvg}));
  for (const auto& f : files) std::cout << f.string() << "\n";
  return 0;
}

int sweep_cmd(const ExperimentArgs& a) {
  require_out(a.common, "sweep");
  const auto params = experiment_params(a);
  const auto lengths = a.lengths.empty() ? default_sweep_lengths() : a.lengths;
  const auto corpus = load_corpus(a.common.corpus, a.common.jobs);
  ExperimentReport report;
  report.sweep = run_window_sweep(corpus, lengths, params);
  report.provenance.params = params;
  report.provenance.sweep_lengths = lengths;
  const fs::path root = a.common.corpus;
  report.provenance.corpus_hash =
      hash_corpus_files(root, root / "annotations.csv", root / "manifest.csv");
  const auto files = emit_report(
      report, a.common.out,
      formats_of(a.common, {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kSvg}));
  for (const auto& f : files) std::cout << f.string() << "\n";
  return 0;
}

// --- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::uint64_t seed = 0;
  int coughs = 10;
  std::vector<int> events_per_burst{1, 1};
  std::vector<double> intra_gap{0.3, 0.6};
  int events = 6;
  int per_class = 0;
  double sample_rate = 8000.0;
  std::string encoding = "float32";
};

int synth_cmd(const SynthArgs& a) {
  if (a.out.empty()) throw Error(ErrorCode::kInvalidArgument, "synth needs --out <dir>");
  SynthCorpusSpec spec;
  spec.seed = a.seed;
  spec.cough_recordings = a.coughs;
  spec.cough.n_events = a.events;
  spec.cough.sample_rate = a.sample_rate;
  spec.cough.burst.events_per_burst = {a.events_per_burst.at(0), a.events_per_burst.at(1)};
  spec.cough.burst.intra_gap = {a.intra_gap.at(0), a.intra_gap.at(1)};
  for (auto cls : kAllSoundClasses) {
    if (cls != SoundClass::kCough && a.per_class > 0) spec.other_recordings[cls] = a.per_class;
  }
  const auto corpus = gen_synthetic_corpus(spec);
  write_corpus(a.out, corpus,
               a.encoding == "pcm16" ? WavEncoding::kPcm16 : WavEncoding::kFloat32);
  std::cout << "wrote " << corpus.recordings.size() << " recordings to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coughcount: event-based and sample-based cough scoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  ScoreEventsArgs se;
  auto* se_cmd = app.add_subcommand("score-events", "Score predicted events against a reference");
  add(se_cmd, "corpus", se.common.corpus, "Corpus root (reference and durations)");
  add(se_cmd, "reference", se.reference, "Reference event CSV");
  add(se_cmd, "durations", se.durations, "CSV recording_id,duration_s");
  add(se_cmd, "predictions", se.common.predictions, "Predicted event CSV")->required();
  add(se_cmd, "out", se.common.out, "Output file (default stdout)");
  add(se_cmd, "jobs", se.common.jobs, "Worker threads");
  add_scoring_flags(se_cmd, se.common);
  add_format_flag(se_cmd, se.common);
  se_cmd->add_flag("--per-recording", se.per_recording, "Emit per-recording counts as CSV");

  ScoreSamplesArgs ss;
  auto* ss_cmd = app.add_subcommand("score-samples", "Score window decisions against a corpus");
  add(ss_cmd, "corpus", ss.common.corpus, "Corpus root")->required();
  add(ss_cmd, "predictions", ss.common.predictions, "Window predictions CSV")->required();
  add(ss_cmd, "window-length", ss.common.window_length, "Window length in seconds")
      ->capture_default_str();
  add(ss_cmd, "overlap", ss.overlap, "Window overlap fraction of the predictions")
      ->capture_default_str();
  add(ss_cmd, "out", ss.common.out, "Output file (default stdout)");
  add(ss_cmd, "jobs", ss.common.jobs, "Worker threads");
  add_format_flag(ss_cmd, ss.common);

  Common sg;
  auto* sg_cmd = app.add_subcommand("segment", "Turn 50%-overlap window decisions into events");
  add(sg_cmd, "corpus", sg.corpus, "Corpus root")->required();
  add(sg_cmd, "predictions", sg.predictions, "Window predictions CSV (50% overlap)")
      ->required();
  add(sg_cmd, "window-length", sg.window_length, "Window length in seconds")
      ->capture_default_str();
  add(sg_cmd, "out", sg.out, "Event CSV to write (default stdout)");
  add(sg_cmd, "jobs", sg.jobs, "Worker threads");

  ScenarioArgs sc;
  auto* sc_cmd = app.add_subcommand("build-scenario", "Subsample a corpus to class shares");
  add(sc_cmd, "corpus", sc.common.corpus, "Corpus root")->required();
  add(sc_cmd, "scenario", sc.scenario, "Scenario JSON")->required();
  add(sc_cmd, "window-length", sc.common.window_length, "Window length in seconds")
      ->capture_default_str();
  add(sc_cmd, "seed", sc.seed, "Override the scenario seed");
  add(sc_cmd, "out", sc.common.out, "Directory for the subset manifest and annotations");
  add(sc_cmd, "jobs", sc.common.jobs, "Worker threads");

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("run-experiment", "Score scenarios in both modes");
  add(ex_cmd, "corpus", ex.common.corpus, "Corpus root")->required();
  add(ex_cmd, "scenario", ex.scenarios, "Scenario JSON (repeatable; default Whole)");
  add(ex_cmd, "window-length", ex.common.window_length, "Window length in seconds")
      ->capture_default_str();
  add(ex_cmd, "predictions", ex.common.predictions,
      "Window predictions CSV on the 50% grid (default: built-in baseline)");
  add(ex_cmd, "detector", ex.detector, "baseline or reference")
      ->check(CLI::IsMember({"baseline", "reference"}));
  add(ex_cmd, "seed", ex.seed, "Override every scenario seed");
  add(ex_cmd, "out", ex.common.out, "Output directory");
  add(ex_cmd, "jobs", ex.common.jobs, "Worker threads");
  add_scoring_flags(ex_cmd, ex.common);
  add_format_flag(ex_cmd, ex.common);
  ex_cmd->add_flag("--sweep", ex.sweep, "Also run the window-length sweep");
  add(ex_cmd, "lengths", ex.lengths, "Sweep window lengths (default 0.4..1.0 by 0.1)");

  ExperimentArgs sw;
  auto* sw_cmd = app.add_subcommand("sweep", "TP counts per mode across window lengths");
  add(sw_cmd, "corpus", sw.common.corpus, "Corpus root")->required();
  add(sw_cmd, "lengths", sw.lengths, "Window lengths (default 0.4..1.0 by 0.1)");
  add(sw_cmd, "predictions", sw.common.predictions,
      "Window predictions CSV; {length} is replaced by each length");
  add(sw_cmd, "detector", sw.detector, "baseline or reference")
      ->check(CLI::IsMember({"baseline", "reference"}));
  add(sw_cmd, "out", sw.common.out, "Output directory");
  add(sw_cmd, "jobs", sw.common.jobs, "Worker threads");
  add_scoring_flags(sw_cmd, sw.common);
  add_format_flag(sw_cmd, sw.common);

  SynthArgs sy;
  auto* sy_cmd = app.add_subcommand("synth", "Write a synthetic corpus");
  add(sy_cmd, "out", sy.out, "Corpus directory")->required();
  add(sy_cmd, "seed", sy.seed, "Corpus seed")->capture_default_str();
  add(sy_cmd, "coughs", sy.coughs, "Cough recordings")->capture_default_str();
  add(sy_cmd, "events", sy.events, "Events per cough recording")->capture_default_str();
  add(sy_cmd, "events-per-burst", sy.events_per_burst, "Burst size range LO HI")
      ->expected(2);
  add(sy_cmd, "intra-gap", sy.intra_gap, "Gap range inside a burst, seconds")->expected(2);
  add(sy_cmd, "per-class", sy.per_class, "Recordings per non-cough class")
      ->capture_default_str();
  add(sy_cmd, "sample-rate", sy.sample_rate, "Sample rate in Hz")->capture_default_str();
  add(sy_cmd, "encoding", sy.encoding, "float32 or pcm16")
      ->check(CLI::IsMember({"float32", "pcm16"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*se_cmd) return score_events_cmd(se);
    if (*ss_cmd) return score_samples_cmd(ss);
    if (*sg_cmd) return segment_cmd(sg);
    if (*sc_cmd) return build_scenario_cmd(sc);
    if (*ex_cmd) return run_experiment_cmd(ex);
    if (*sw_cmd) return sweep_cmd(sw);
    if (*sy_cmd) return synth_cmd(sy);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_io_error(e.code()) ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: missing recording in predictions (" << e.what() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
