#include "coughcount/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coughcount/csv.hpp"
#include "coughcount/error.hpp"

namespace coughcount {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json metrics_json(const MetricReport& r) {
  ordered_json counts;
  counts["tp"] = r.tp;
  counts["fp"] = r.fp;
  counts["fn"] = r.fn;
  if (r.tn) counts["tn"] = *r.tn;
  counts["monitored_duration_s"] = r.monitored_duration;

  ordered_json metrics;
  metrics["SE"] = optional_json(r.se);
  metrics["PR"] = optional_json(r.pr);
  metrics["F1"] = optional_json(r.f1);
  metrics["FP_per_hr"] = r.fp_per_hr;
  if (r.mode == ScoringMode::kSample) {
    metrics["SP"] = optional_json(r.sp);
    metrics["AC"] = optional_json(r.ac);
    metrics["NPV"] = optional_json(r.npv);
    metrics["ROC_AUC"] = optional_json(r.roc_auc);
  }
  ordered_json out;
  out["mode"] = to_string(r.mode);
  out["counts"] = counts;
  out["metrics"] = metrics;
  return out;
}

ordered_json class_map_json(const auto& m) {
  ordered_json out = ordered_json::object();
  for (const auto& [c, v] : m) out[to_string(c)] = v;
  return out;
}

ordered_json scenario_spec_json(const ScenarioSpec& spec) {
  ordered_json out;
  out["name"] = spec.name;
  out["seed"] = spec.seed;
  out["tolerance"] = spec.tolerance;
  out["target_fractions"] = class_map_json(spec.target_fractions);
  return out;
}

ordered_json provenance_json(const Provenance& p) {
  const auto& params = p.params;
  ordered_json out;
  out["tool"] = "coughcount";
  out["version"] = kToolVersion;
  out["corpus_hash"] = p.corpus_hash.empty() ? ordered_json(nullptr) : ordered_json(p.corpus_hash);
  out["aggregation"] = "micro (counts summed over recordings before metrics)";
  out["window_length_s"] = params.window_length;
  out["scoring"] = {{"tolerance_start_s", params.scoring.tolerance_start},
                    {"tolerance_end_s", params.scoring.tolerance_end},
                    {"max_event_duration_s", params.scoring.max_event_duration},
                    {"min_separation_s", params.scoring.min_separation},
                    {"min_overlap_s", params.scoring.min_overlap}};
  const auto& seg = params.segmenter;
  out["segmenter"] = {{"hi_fraction", seg.hi_fraction},
                      {"lo_fraction", seg.lo_fraction},
                      {"min_peak_separation_s", seg.min_peak_separation},
                      {"avg_duration_init_s", seg.avg_duration_init},
                      {"burst_gap_s", seg.burst_gap},
                      {"frame_length_s", seg.frame_length},
                      {"frame_hop_s", seg.frame_hop},
                      {"max_duration_s", seg.phase_model.max_duration},
                      {"min_duration_s", seg.phase_model.min_duration()}};
  ordered_json detector;
  detector["kind"] = to_string(params.detector.kind);
  if (params.detector.kind == DetectorKind::kBaseline) {
    const auto& b = params.detector.baseline;
    detector["energy_weight"] = b.energy_weight;
    detector["crest_weight"] = b.crest_weight;
    detector["bias"] = b.bias;
    detector["decision_threshold"] = b.decision_threshold;
  } else if (params.detector.kind == DetectorKind::kPredictions) {
    detector["predictions"] = params.detector.predictions_path;
  }
  out["detector"] = detector;
  ordered_json scenarios = ordered_json::array();
  for (const auto& s : p.scenarios) scenarios.push_back(scenario_spec_json(s));
  out["scenarios"] = scenarios;
  out["sweep_lengths_s"] = p.sweep_lengths;
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string comment_safe(std::string s) {
  for (std::size_t pos = s.find("--"); pos != std::string::npos; pos = s.find("--")) {
    s.replace(pos, 2, "- -");
  }
  return s;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "svg") return ReportFormat::kSvg;
  throw Error(ErrorCode::kInvalidArgument, "unknown format '" + name + "' (json|csv|svg)");
}

std::string metric_report_json(const MetricReport& report, const std::string& scenario) {
  ordered_json out;
  out["scenario"] = scenario;
  const auto m = metrics_json(report);
  for (const auto& [k, v] : m.items()) out[k] = v;
  return out.dump(2) + "\n";
}

std::string metric_report_csv_row(const MetricReport& r, const std::string& scenario) {
  std::ostringstream os;
  os << csv::escape(scenario) << ',' << to_string(r.mode) << ','
     << csv::format_optional(r.se) << ',' << csv::format_optional(r.pr) << ','
     << csv::format_optional(r.f1) << ',' << csv::format_double(r.fp_per_hr) << ','
     << r.tp << ',' << r.fp << ',' << r.fn << ','
     << csv::format_double(r.monitored_duration);
  return os.str();
}

std::string report_json(const ExperimentReport& report) {
  ordered_json root;
  root["provenance"] = provenance_json(report.provenance);
  ordered_json scenarios = ordered_json::array();
  for (const auto& s : report.scenarios) {
    ordered_json j;
    j["name"] = s.spec.name;
    j["n_recordings"] = s.n_recordings;
    j["target_reached"] = s.target_reached;
    j["diagnostic"] = s.diagnostic.empty() ? ordered_json(nullptr) : ordered_json(s.diagnostic);
    j["windows"] = class_map_json(s.windows);
    j["achieved_fractions"] = class_map_json(s.achieved_fractions);
    j["SB"] = metrics_json(s.sb);
    j["EB"] = metrics_json(s.eb);
    ordered_json rows = ordered_json::array();
    for (const auto& r : s.per_recording) {
      ordered_json row;
      row["recording_id"] = r.recording_id;
      row["sound_class"] = to_string(r.sound_class);
      row["SB"] = {{"tp", r.sb.tp}, {"tn", r.sb.tn}, {"fp", r.sb.fp}, {"fn", r.sb.fn}};
      row["EB"] = {{"tp", r.eb.tp}, {"fp", r.eb.fp}, {"fn", r.eb.fn}};
      row["duration_s"] = r.eb.monitored_duration;
      rows.push_back(row);
    }
    j["per_recording"] = rows;
    scenarios.push_back(j);
  }
  root["scenarios"] = scenarios;
  if (report.sweep) {
    ordered_json sweep;
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.sweep->rows) {
      rows.push_back({{"window_length_s", r.window_length}, {"SB_tp", r.sb_tp}, {"EB_tp", r.eb_tp}});
    }
    sweep["rows"] = rows;
    sweep["true_events"] = report.sweep->true_events;
    sweep["SB_tp_std"] = report.sweep->sb_tp_std;
    sweep["EB_tp_std"] = report.sweep->eb_tp_std;
    root["sweep"] = sweep;
  } else {
    root["sweep"] = nullptr;
    root["sweep_note"] = "no window-length sweep was run";
  }
  return root.dump(2) + "\n";
}

std::string report_csv(const ExperimentReport& report) {
  std::string out = std::string(kMetricCsvHeader) + "\n";
  for (const auto& s : report.scenarios) {
    out += metric_report_csv_row(s.sb, s.spec.name) + "\n";
    out += metric_report_csv_row(s.eb, s.spec.name) + "\n";
  }
  return out;
}

std::string per_recording_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "scenario,recording_id,sound_class,sb_tp,sb_tn,sb_fp,sb_fn,eb_tp,eb_fp,eb_fn,"
        "duration_s\n";
  for (const auto& s : report.scenarios) {
    for (const auto& r : s.per_recording) {
      os << csv::escape(s.spec.name) << ',' << csv::escape(r.recording_id) << ','
         << to_string(r.sound_class) << ',' << r.sb.tp << ',' << r.sb.tn << ','
         << r.sb.fp << ',' << r.sb.fn << ',' << r.eb.tp << ',' << r.eb.fp << ','
         << r.eb.fn << ',' << csv::format_double(r.eb.monitored_duration) << '\n';
    }
  }
  return os.str();
}

std::string sweep_csv(const SweepReport& sweep) {
  std::ostringstream os;
  os << "window_length_s,sb_tp,eb_tp\n";
  for (const auto& r : sweep.rows) {
    os << csv::format_double(r.window_length) << ',' << r.sb_tp << ',' << r.eb_tp << '\n';
  }
  os << "std," << csv::format_double(sweep.sb_tp_std) << ','
     << csv::format_double(sweep.eb_tp_std) << '\n';
  return os.str();
}

std::string provenance_summary(const ExperimentReport& report) {
  const auto& p = report.provenance;
  std::ostringstream os;
  os << "coughcount " << kToolVersion
     << "; corpus_hash=" << (p.corpus_hash.empty() ? "n/a" : p.corpus_hash)
     << "; detector=" << to_string(p.params.detector.kind)
     << "; window_length_s=" << csv::format_double(p.params.window_length)
     << "; tolerance_s=" << csv::format_double(p.params.scoring.tolerance_start) << "/"
     << csv::format_double(p.params.scoring.tolerance_end)
     << "; max_event_duration_s=" << csv::format_double(p.params.scoring.max_event_duration)
     << "; seeds=";
  for (std::size_t i = 0; i < p.scenarios.size(); ++i) {
    os << (i ? "," : "") << p.scenarios[i].name << ":" << p.scenarios[i].seed;
  }
  return os.str();
}

std::string metrics_svg(const ExperimentReport& report) {
  struct Panel {
    const char* title;
    bool ratio;
    std::optional<double> (*get)(const MetricReport&);
  };
  const Panel panels[] = {
      {"SE", true, [](const MetricReport& r) { return r.se; }},
      {"PR", true, [](const MetricReport& r) { return r.pr; }},
      {"F1", true, [](const MetricReport& r) { return r.f1; }},
      {"FP/hr", false,
       [](const MetricReport& r) { return std::optional<double>(r.fp_per_hr); }},
  };
  const std::size_t n_scen = std::max<std::size_t>(1, report.scenarios.size());
  const double panel_w = 60.0 + 70.0 * static_cast<double>(n_scen);
  const double panel_h = 220.0;
  const double width = 4 * panel_w + 20;
  const double height = panel_h + 70;
  const char* colors[] = {"#4c72b0", "#dd8452"};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- " << comment_safe(provenance_summary(report)) << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0)
     << "\" height=\"" << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < 4; ++p) {
    const auto& panel = panels[p];
    const double x0 = 10 + static_cast<double>(p) * panel_w + 40;
    const double y0 = 30;
    const double plot_h = panel_h - 40;
    const double plot_w = panel_w - 50;
    double vmax = 1.0;
    if (!panel.ratio) {
      vmax = 0.0;
      for (const auto& s : report.scenarios) {
        vmax = std::max({vmax, s.sb.fp_per_hr, s.eb.fp_per_hr});
      }
      if (vmax <= 0) vmax = 1.0;
    }
    os << "<g>\n<text x=\"" << fixed(x0 + plot_w / 2, 1) << "\" y=\"18\" text-anchor=\"middle\" "
       << "font-weight=\"bold\">" << xml_escape(panel.title) << "</text>\n";
    os << "<line x1=\"" << fixed(x0, 1) << "\" y1=\"" << fixed(y0 + plot_h, 1) << "\" x2=\""
       << fixed(x0 + plot_w, 1) << "\" y2=\"" << fixed(y0 + plot_h, 1)
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << fixed(x0, 1) << "\" y1=\"" << fixed(y0, 1) << "\" x2=\""
       << fixed(x0, 1) << "\" y2=\"" << fixed(y0 + plot_h, 1) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(x0 - 4, 1) << "\" y=\"" << fixed(y0 + 4, 1)
       << "\" text-anchor=\"end\">" << fixed(vmax, panel.ratio ? 1 : 2) << "</text>\n";
    os << "<text x=\"" << fixed(x0 - 4, 1) << "\" y=\"" << fixed(y0 + plot_h, 1)
       << "\" text-anchor=\"end\">0</text>\n";
    const double group_w = plot_w / static_cast<double>(n_scen);
    for (std::size_t s = 0; s < report.scenarios.size(); ++s) {
      const auto& scen = report.scenarios[s];
      const MetricReport* modes[] = {&scen.sb, &scen.eb};
      for (int m = 0; m < 2; ++m) {
        const auto value = panel.get(*modes[m]);
        const double bar_w = group_w * 0.35;
        const double x = x0 + group_w * static_cast<double>(s) + group_w * 0.12 + bar_w * m;
        const double v = value ? std::clamp(*value / vmax, 0.0, 1.0) : 0.0;
        const double h = plot_h * v;
        os << "<rect x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y0 + plot_h - h, 1)
           << "\" width=\"" << fixed(bar_w, 1) << "\" height=\"" << fixed(h, 1)
           << "\" fill=\"" << colors[m] << "\"><title>" << xml_escape(scen.spec.name) << " "
           << to_string(modes[m]->mode) << " " << panel.title << " = "
           << (value ? fixed(*value, 4) : std::string("n/a")) << "</title></rect>\n";
      }
      os << "<text x=\"" << fixed(x0 + group_w * (static_cast<double>(s) + 0.5), 1)
         << "\" y=\"" << fixed(y0 + plot_h + 14, 1) << "\" text-anchor=\"middle\">"
         << xml_escape(scen.spec.name) << "</text>\n";
    }
    os << "</g>\n";
  }
  for (int m = 0; m < 2; ++m) {
    const double x = 20 + 60.0 * m;
    os << "<rect x=\"" << fixed(x, 0) << "\" y=\"" << fixed(height - 22, 0)
       << "\" width=\"10\" height=\"10\" fill=\"" << colors[m] << "\"/>\n";
    os << "<text x=\"" << fixed(x + 14, 0) << "\" y=\"" << fixed(height - 13, 0) << "\">"
       << (m == 0 ? "SB" : "EB") << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string sweep_svg(const SweepReport& sweep, const std::string& provenance) {
  const double width = 120.0 + 80.0 * static_cast<double>(std::max<std::size_t>(1, sweep.rows.size()));
  const double height = 280.0;
  const double x0 = 60;
  const double y0 = 30;
  const double plot_h = 200;
  const double plot_w = width - x0 - 20;
  double vmax = static_cast<double>(sweep.true_events);
  for (const auto& r : sweep.rows) {
    vmax = std::max({vmax, static_cast<double>(r.sb_tp), static_cast<double>(r.eb_tp)});
  }
  if (vmax <= 0) vmax = 1;
  const char* colors[] = {"#4c72b0", "#dd8452"};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- " << comment_safe(provenance) << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0)
     << "\" height=\"" << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fixed(x0 + plot_w / 2, 1)
     << "\" y=\"18\" text-anchor=\"middle\" font-weight=\"bold\">TP count vs window length</text>\n";
  os << "<line x1=\"" << fixed(x0, 1) << "\" y1=\"" << fixed(y0 + plot_h, 1) << "\" x2=\""
     << fixed(x0 + plot_w, 1) << "\" y2=\"" << fixed(y0 + plot_h, 1) << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fixed(x0 - 4, 1) << "\" y=\"" << fixed(y0 + 4, 1)
     << "\" text-anchor=\"end\">" << fixed(vmax, 0) << "</text>\n";
  const double group_w = plot_w / static_cast<double>(std::max<std::size_t>(1, sweep.rows.size()));
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    const auto& r = sweep.rows[i];
    const double vals[] = {static_cast<double>(r.sb_tp), static_cast<double>(r.eb_tp)};
    for (int m = 0; m < 2; ++m) {
      const double bar_w = group_w * 0.35;
      const double x = x0 + group_w * static_cast<double>(i) + group_w * 0.12 + bar_w * m;
      const double h = plot_h * vals[m] / vmax;
      os << "<rect x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y0 + plot_h - h, 1)
         << "\" width=\"" << fixed(bar_w, 1) << "\" height=\"" << fixed(h, 1) << "\" fill=\""
         << colors[m] << "\"><title>" << (m == 0 ? "SB" : "EB") << " TP = " << fixed(vals[m], 0)
         << "</title></rect>\n";
    }
    os << "<text x=\"" << fixed(x0 + group_w * (static_cast<double>(i) + 0.5), 1) << "\" y=\""
       << fixed(y0 + plot_h + 14, 1) << "\" text-anchor=\"middle\">"
       << fixed(r.window_length, 1) << " s</text>\n";
  }
  const double ty = y0 + plot_h * (1.0 - static_cast<double>(sweep.true_events) / vmax);
  os << "<line x1=\"" << fixed(x0, 1) << "\" y1=\"" << fixed(ty, 1) << "\" x2=\""
     << fixed(x0 + plot_w, 1) << "\" y2=\"" << fixed(ty, 1)
     << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"><title>true events = "
     << sweep.true_events << "</title></line>\n";
  for (int m = 0; m < 2; ++m) {
    const double x = 20 + 60.0 * m;
    os << "<rect x=\"" << fixed(x, 0) << "\" y=\"" << fixed(height - 22, 0)
       << "\" width=\"10\" height=\"10\" fill=\"" << colors[m] << "\"/>\n";
    os << "<text x=\"" << fixed(x + 14, 0) << "\" y=\"" << fixed(height - 13, 0) << "\">"
       << (m == 0 ? "SB" : "EB") << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<fs::path> emit_report(const ExperimentReport& report, const fs::path& out_dir,
                                  const std::set<ReportFormat>& formats) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + out_dir.string());
  }
  std::vector<fs::path> written;
  auto emit = [&](const char* name, const std::string& content) {
    const auto path = out_dir / name;
    write_file(path, content);
    written.push_back(path);
  };
  if (formats.count(ReportFormat::kJson)) emit("report.json", report_json(report));
  if (formats.count(ReportFormat::kCsv)) {
    emit("metrics.csv", report_csv(report));
    if (!report.scenarios.empty()) emit("per_recording.csv", per_recording_csv(report));
    if (report.sweep) emit("sweep.csv", sweep_csv(*report.sweep));
  }
  if (formats.count(ReportFormat::kSvg)) {
    if (!report.scenarios.empty()) emit("metrics.svg", metrics_svg(report));
    if (report.sweep) emit("sweep.svg", sweep_svg(*report.sweep, provenance_summary(report)));
  }
  return written;
}

}  // namespace coughcount
