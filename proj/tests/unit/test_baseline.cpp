#include <catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "coughcount/baseline.hpp"
#include "coughcount/error.hpp"
#include "support.hpp"

using namespace coughcount;

namespace {

Recording recording(std::vector<float> samples, double sr, const std::string& id = "r") {
  auto audio = std::make_shared<Audio>();
  audio->samples = std::move(samples);
  audio->sample_rate = sr;
  Recording r;
  r.id = id;
  r.sound_class = SoundClass::kCough;
  r.audio = audio;
  r.reference = {id, audio->duration(), {}};
  return r;
}

Recording noisy_with_burst(double scale = 1.0) {
  Rng rng(61);
  std::vector<float> x(4000 * 8);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = 0.01 * rng.uniform(-1, 1);
    if (i >= 4000 * 3 + 800 && i < 4000 * 3 + 1600) v = rng.uniform(-0.8, 0.8);
    x[i] = static_cast<float>(scale * v);
  }
  return recording(std::move(x), 4000.0);
}

ErrorCode load_error(const std::string& csv, const Corpus* known,
                     std::optional<WindowGrid> grid = std::nullopt) {
  std::istringstream in(csv);
  try {
    read_window_predictions(in, "preds.csv", known, grid);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

const std::string kHeader = "recording_id,window_start_s,window_length_s,score,decision\n";

}  // namespace

TEST_CASE("silent audio sits at the logistic midpoint") {
  auto r = recording(std::vector<float>(8000, 0.0f), 1000.0);
  BaselineConfig cfg;
  auto s = classify_windows(r, cfg);
  REQUIRE(s.windows.size() == 19);
  for (const auto& w : s.windows) {
    CHECK(w.score == 0.5);
    CHECK(w.decision);
  }
  cfg.decision_threshold = 0.6;
  s = classify_windows(r, cfg);
  for (const auto& w : s.windows) CHECK_FALSE(w.decision);
}

TEST_CASE("burst window scores highest") {
  BaselineConfig cfg;
  cfg.overlap_fraction = 0.0;
  auto s = classify_windows(noisy_with_burst(), cfg);
  REQUIRE(s.windows.size() == 10);
  auto best = std::max_element(s.windows.begin(), s.windows.end(),
                               [](const Window& a, const Window& b) { return a.score < b.score; });
  // The burst occupies [3.2, 3.4) s, inside window 4 = [3.2, 4.0).
  CHECK(best - s.windows.begin() == 4);
  CHECK(best->decision);
}

TEST_CASE("scores ignore global gain") {
  BaselineConfig cfg;
  auto a = classify_windows(noisy_with_burst(1.0), cfg);
  auto b = classify_windows(noisy_with_burst(0.125), cfg);
  REQUIRE(a.windows.size() == b.windows.size());
  for (std::size_t i = 0; i < a.windows.size(); ++i) {
    REQUIRE(a.windows[i].score == Catch::Approx(b.windows[i].score).margin(1e-9));
  }
  CHECK(classify_windows(noisy_with_burst(), cfg) == a);
}

TEST_CASE("config validation") {
  BaselineConfig cfg;
  cfg.decision_threshold = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.overlap_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.energy_weight = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("two recordings load as two series") {
  std::istringstream in(kHeader +
                        "a,0,0.8,0.1,0\n"
                        "b,0.4,0.8,0.7,1\n"
                        "a,0.4,0.8,0.9,1\n"
                        "b,0,0.8,0.2,0\n");
  auto series = read_window_predictions(in, "mem");
  REQUIRE(series.size() == 2);
  CHECK(series[0].recording_id == "a");
  CHECK(series[0].hop == Catch::Approx(0.4));
  CHECK(series[0].windows[1].score == 0.9);
  CHECK(series[1].windows[0].start == 0.0);
}

TEST_CASE("prediction file validation") {
  CHECK(load_error(kHeader + "a,0,0.8,1.3,1\n", nullptr) == ErrorCode::kScoreOutOfRange);
  {
    std::istringstream in(kHeader + "a,0,0.8,0.5,1\na,0.8,0.8,1.3,1\n");
    try {
      read_window_predictions(in, "preds.csv");
      FAIL("score accepted");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }
  CHECK(load_error(kHeader + "a,0,0.8,0.5,2\n", nullptr) == ErrorCode::kParse);
  CHECK(load_error(kHeader + "a,0,0.8,0.5,1\na,0.4,0.8,,1\n", nullptr) == ErrorCode::kParse);

  const std::string half = kHeader + "a,0,0.8,0.5,1\na,0.4,0.8,0.5,1\n";
  CHECK(load_error(half, nullptr, WindowGrid{0.8, 0.0}) == ErrorCode::kGridMismatch);
  {
    std::istringstream in(half);
    try {
      read_window_predictions(in, "p", nullptr, WindowGrid{0.8, 0.0});
    } catch (const Error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("0.8") != std::string::npos);
      CHECK(msg.find("0.4") != std::string::npos);
    }
  }
  CHECK(load_error(half, nullptr, WindowGrid{1.0, 0.5}) == ErrorCode::kGridMismatch);

  Corpus known;
  known.recordings.push_back(recording(std::vector<float>(1200, 0.0f), 1000.0, "a"));
  CHECK(load_error(half + "zz,0,0.8,0.5,1\n", &known) == ErrorCode::kUnknownRecording);
  // 1.2 s holds two windows of 0.8 s at 0.4 s hop; a third is off the grid.
  CHECK(load_error(half, &known, WindowGrid{0.8, 0.5}) == ErrorCode::kIo);
  CHECK(load_error(half + "a,0.8,0.8,0.5,1\n", &known) == ErrorCode::kGridMismatch);
}

TEST_CASE("decision-only files have no scores") {
  std::istringstream in(kHeader + "a,0,0.8,,1\na,0.8,0.8,,0\n");
  auto series = read_window_predictions(in, "mem");
  REQUIRE(series.size() == 1);
  CHECK_FALSE(series[0].has_scores);
}

TEST_CASE("prediction csv round trip") {
  Corpus known;
  known.recordings.push_back(noisy_with_burst());
  BaselineConfig cfg;
  std::vector<WindowSeries> series{classify_windows(known.recordings[0], cfg)};
  std::ostringstream out;
  write_window_predictions(out, series);
  std::istringstream in(out.str());
  auto back = read_window_predictions(in, "mem", &known, WindowGrid{0.8, 0.5});
  REQUIRE(back.size() == 1);
  CHECK(back[0] == series[0]);
}
