#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "coughcount/harness.hpp"
#include "coughcount/metrics.hpp"

namespace coughcount {

enum class ReportFormat { kJson, kCsv, kSvg };

ReportFormat parse_report_format(const std::string& name);

// Full report: provenance, per-scenario SB/EB metrics with counts, per
// recording counts and the sweep (or a note that none was run).
std::string report_json(const ExperimentReport& report);

// `scenario,mode,SE,PR,F1,FP_per_hr,TP,FP,FN,duration_s`, one row per
// scenario and mode. Absent metrics are empty fields.
std::string report_csv(const ExperimentReport& report);

// `scenario,recording_id,sound_class,sb_tp,sb_tn,sb_fp,sb_fn,eb_tp,eb_fp,eb_fn,duration_s`
std::string per_recording_csv(const ExperimentReport& report);

// `window_length_s,sb_tp,eb_tp` plus std rows.
std::string sweep_csv(const SweepReport& sweep);

// Grouped bars (SE, PR, F1, FP/hr) per scenario and mode.
std::string metrics_svg(const ExperimentReport& report);
std::string sweep_svg(const SweepReport& sweep, const std::string& provenance);

// One-line provenance summary embedded as an SVG comment.
std::string provenance_summary(const ExperimentReport& report);

std::string metric_report_json(const MetricReport& report, const std::string& scenario);
std::string metric_report_csv_row(const MetricReport& report, const std::string& scenario);
inline constexpr const char* kMetricCsvHeader =
    "scenario,mode,SE,PR,F1,FP_per_hr,TP,FP,FN,duration_s";

// Writes report.json, metrics.csv, per_recording.csv, metrics.svg and, when
// a sweep ran, sweep.csv / sweep.svg. Output is byte-stable for a given
// report. Returns the files written.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir,
                                               const std::set<ReportFormat>& formats);

}  // namespace coughcount
