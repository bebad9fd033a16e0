#include "coughcount/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "coughcount/csv.hpp"
#include "coughcount/error.hpp"
#include "coughcount/segmenter.hpp"

namespace coughcount {

namespace {

void standardize(std::vector<double>& xs) {
  if (xs.empty()) return;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / static_cast<double>(xs.size()));
  for (double& x : xs) x = sd > 0 ? (x - mean) / sd : 0.0;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr double kGridSlack = 1e-6;

}  // namespace

void BaselineConfig::validate() const {
  if (!std::isfinite(energy_weight) || !std::isfinite(crest_weight) ||
      !std::isfinite(bias)) {
    throw Error(ErrorCode::kInvalidArgument, "baseline weights must be finite");
  }
  if (!(decision_threshold >= 0 && decision_threshold <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "decision threshold must be in [0, 1]");
  }
  if (!(window_length > 0) || !(overlap_fraction >= 0 && overlap_fraction < 1)) {
    throw Error(ErrorCode::kInvalidArgument,
                "baseline windows: need window_length > 0 and 0 <= overlap < 1");
  }
  if (!(frame_hop > 0) || !(frame_length >= frame_hop)) {
    throw Error(ErrorCode::kInvalidArgument, "baseline frames: need frame_length >= frame_hop > 0");
  }
}

WindowSeries classify_windows(const Recording& recording, const BaselineConfig& config) {
  config.validate();
  WindowSeries series =
      cut_windows(recording, config.window_length, config.overlap_fraction);
  const auto& audio = *recording.audio;
  const std::size_t n = series.windows.size();
  std::vector<double> energy(n, 0.0);
  std::vector<double> crest(n, 1.0);
  const auto window_samples = static_cast<std::size_t>(
      std::max(1L, std::lround(config.window_length * audio.sample_rate)));

  for (std::size_t k = 0; k < n; ++k) {
    const auto begin = std::min(
        audio.samples.size(),
        static_cast<std::size_t>(std::lround(series.windows[k].start * audio.sample_rate)));
    const auto end = std::min(audio.samples.size(), begin + window_samples);
    if (end <= begin) continue;
    const std::span<const float> chunk(audio.samples.data() + begin, end - begin);
    double acc = 0.0;
    for (float s : chunk) acc += static_cast<double>(s) * s;
    energy[k] = acc / static_cast<double>(chunk.size());
    const auto env = power_envelope(chunk, audio.sample_rate, config.frame_length,
                                    config.frame_hop);
    double peak = 0.0;
    double sum = 0.0;
    for (double v : env.values) {
      peak = std::max(peak, v);
      sum += v;
    }
    const double mean = sum / static_cast<double>(env.values.size());
    crest[k] = mean > 0 ? peak / mean : 1.0;
  }

  // The floor scales with the loudest window, keeping log-energy z-scores
  // invariant to a global gain.
  const double max_energy = n ? *std::max_element(energy.begin(), energy.end()) : 0.0;
  std::vector<double> log_energy(n, 0.0);
  if (max_energy > 0) {
    for (std::size_t k = 0; k < n; ++k) {
      log_energy[k] = std::log(energy[k] + 1e-10 * max_energy);
    }
  }
  standardize(log_energy);
  standardize(crest);

  for (std::size_t k = 0; k < n; ++k) {
    auto& w = series.windows[k];
    w.score = logistic(config.bias + config.energy_weight * log_energy[k] +
                       config.crest_weight * crest[k]);
    w.decision = w.score >= config.decision_threshold;
  }
  return series;
}

std::vector<WindowSeries> read_window_predictions(std::istream& in,
                                                  const std::string& source,
                                                  const Corpus* known,
                                                  const std::optional<WindowGrid>& expected) {
  const auto rows = csv::read(
      in, {"recording_id", "window_start_s", "window_length_s", "score", "decision"},
      source);

  struct Pending {
    WindowSeries series;
    std::size_t first_line = 0;
    bool any_score = false;
    bool any_missing = false;
  };
  std::vector<Pending> pending;
  std::map<std::string, std::size_t> index;

  for (const auto& row : rows) {
    const std::string where = source + ":" + std::to_string(row.line);
    const std::string& id = row.fields[0];
    if (known && !known->find(id)) {
      throw Error(ErrorCode::kUnknownRecording,
                  where + ": unknown recording '" + id + "'");
    }
    auto [it, inserted] = index.try_emplace(id, pending.size());
    if (inserted) {
      Pending p;
      p.series.recording_id = id;
      p.first_line = row.line;
      p.series.window_length = csv::parse_double(row.fields[2], where);
      if (!(p.series.window_length > 0)) {
        throw Error(ErrorCode::kGridMismatch, where + ": window length must be positive");
      }
      pending.push_back(std::move(p));
    }
    auto& p = pending[it->second];

    Window w;
    w.start = csv::parse_double(row.fields[1], where);
    const double length = csv::parse_double(row.fields[2], where);
    if (std::abs(length - p.series.window_length) > kGridSlack) {
      throw Error(ErrorCode::kGridMismatch,
                  where + ": window length " + row.fields[2] + " differs from " +
                      csv::format_double(p.series.window_length) +
                      " used earlier for '" + id + "'");
    }
    if (row.fields[3].empty()) {
      p.any_missing = true;
    } else {
      w.score = csv::parse_double(row.fields[3], where);
      if (w.score < 0 || w.score > 1) {
        throw Error(ErrorCode::kScoreOutOfRange,
                    where + ": score " + row.fields[3] + " outside [0, 1] (row " +
                        std::to_string(row.line) + ")");
      }
      p.any_score = true;
    }
    const auto decision = csv::parse_int(row.fields[4], where);
    if (decision != 0 && decision != 1) {
      throw Error(ErrorCode::kParse, where + ": decision must be 0 or 1");
    }
    w.decision = decision == 1;
    p.series.windows.push_back(w);
  }

  std::vector<WindowSeries> out;
  out.reserve(pending.size());
  for (auto& p : pending) {
    auto& s = p.series;
    const std::string where = source + ": recording '" + s.recording_id + "'";
    if (p.any_score && p.any_missing) {
      throw Error(ErrorCode::kParse, where + " mixes scored and unscored windows");
    }
    s.has_scores = !p.any_missing;
    if (!s.has_scores) {
      for (auto& w : s.windows) w.score = w.decision ? 1.0 : 0.0;
    }
    std::stable_sort(s.windows.begin(), s.windows.end(),
                     [](const Window& a, const Window& b) { return a.start < b.start; });

    if (expected && std::abs(expected->window_length - s.window_length) > kGridSlack) {
      throw Error(ErrorCode::kGridMismatch,
                  where + ": expected window length " +
                      csv::format_double(expected->window_length) + ", found " +
                      csv::format_double(s.window_length));
    }
    if (s.windows.size() > 1) {
      s.hop = s.windows[1].start - s.windows[0].start;
    } else {
      s.hop = expected ? expected->hop() : s.window_length;
    }
    if (!(s.hop > kGridSlack)) {
      throw Error(ErrorCode::kGridMismatch, where + ": duplicate window starts");
    }
    if (expected && std::abs(expected->hop() - s.hop) > kGridSlack) {
      throw Error(ErrorCode::kGridMismatch,
                  where + ": expected hop " + csv::format_double(expected->hop()) +
                      ", found " + csv::format_double(s.hop));
    }
    for (std::size_t k = 0; k < s.windows.size(); ++k) {
      const double want = static_cast<double>(k) * s.hop;
      if (std::abs(s.windows[k].start - want) > kGridSlack) {
        throw Error(ErrorCode::kGridMismatch,
                    where + ": window " + std::to_string(k) + " starts at " +
                        csv::format_double(s.windows[k].start) + ", expected " +
                        csv::format_double(want) + " for hop " +
                        csv::format_double(s.hop));
      }
      s.windows[k].start = want;
    }
    if (known) {
      const auto* rec = known->find(s.recording_id);
      s.recording_duration = rec->duration();
      const auto n = window_count(s.recording_duration, s.window_length, s.hop);
      if (n != s.windows.size()) {
        throw Error(ErrorCode::kGridMismatch,
                    where + ": expected " + std::to_string(n) + " windows, found " +
                        std::to_string(s.windows.size()));
      }
    } else {
      s.recording_duration = s.windows.back().start + s.window_length;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<WindowSeries> load_window_predictions(const std::string& path,
                                                  const Corpus* known,
                                                  const std::optional<WindowGrid>& expected) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open window predictions: " + path);
  return read_window_predictions(in, path, known, expected);
}

void write_window_predictions(std::ostream& out, std::span<const WindowSeries> series) {
  out << "recording_id,window_start_s,window_length_s,score,decision\n";
  for (const auto& s : series) {
    for (const auto& w : s.windows) {
      out << csv::escape(s.recording_id) << ',' << csv::format_double(w.start) << ','
          << csv::format_double(s.window_length) << ','
          << (s.has_scores ? csv::format_double(w.score) : std::string()) << ','
          << (w.decision ? 1 : 0) << '\n';
    }
  }
}

void write_window_predictions_file(const std::string& path,
                                   std::span<const WindowSeries> series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write window predictions: " + path);
  write_window_predictions(out, series);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace coughcount
