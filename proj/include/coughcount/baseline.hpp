#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coughcount/corpus.hpp"
#include "coughcount/sb_scorer.hpp"

namespace coughcount {

// Energy + crest window classifier. It is only meant to give both scorers a
// realistic mixture of hits and false alarms without an ML stack.
struct BaselineConfig {
  double energy_weight = 1.0;
  double crest_weight = 1.0;
  // Logistic input when both standardized features are zero, so a
  // featureless (all-zero) recording scores logistic(bias) = 0.5 everywhere.
  double bias = 0.0;
  double decision_threshold = 0.5;
  double window_length = 0.8;
  double overlap_fraction = 0.5;
  // Frames used for the crest proxy inside each window.
  double frame_length = 0.010;
  double frame_hop = 0.005;

  void validate() const;
};

// score = logistic(bias + energy_weight * z(log energy) + crest_weight * z(crest))
// with z-scores taken over the windows of this recording and crest the
// peak-to-mean ratio of frame power inside the window.
WindowSeries classify_windows(const Recording& recording, const BaselineConfig& config);

struct WindowGrid {
  double window_length = 0.8;
  double overlap_fraction = 0.5;

  double hop() const { return window_length * (1.0 - overlap_fraction); }
};

// Reads the window predictions CSV, one series per recording in order of
// first appearance, windows sorted by start. When `known` is given every
// recording must exist in it and match its window grid; `expected` pins the
// window length and hop.
std::vector<WindowSeries> read_window_predictions(
    std::istream& in, const std::string& source, const Corpus* known = nullptr,
    const std::optional<WindowGrid>& expected = std::nullopt);

std::vector<WindowSeries> load_window_predictions(
    const std::string& path, const Corpus* known = nullptr,
    const std::optional<WindowGrid>& expected = std::nullopt);

void write_window_predictions(std::ostream& out, std::span<const WindowSeries> series);
void write_window_predictions_file(const std::string& path,
                                   std::span<const WindowSeries> series);

}  // namespace coughcount
