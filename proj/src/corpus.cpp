#include "coughcount/corpus.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coughcount/csv.hpp"
#include "coughcount/error.hpp"
#include "coughcount/log.hpp"
#include "coughcount/parallel.hpp"
#include "coughcount/rng.hpp"

namespace coughcount {

namespace fs = std::filesystem;

const char* to_string(SoundClass c) {
  switch (c) {
    case SoundClass::kCough: return "cough";
    case SoundClass::kBackground: return "background";
    case SoundClass::kBreathing: return "breathing";
    case SoundClass::kThroatClearing: return "throat-clearing";
    case SoundClass::kSpeech: return "speech";
    case SoundClass::kLaughter: return "laughter";
    case SoundClass::kOtherNoise: return "other-noise";
  }
  return "unknown";
}

SoundClass parse_sound_class(std::string_view name) {
  std::string key(name);
  for (auto& ch : key) {
    if (ch == '_') ch = '-';
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  if (key == "silence" || key == "silence/background") return SoundClass::kBackground;
  for (auto c : kAllSoundClasses) {
    if (key == to_string(c)) return c;
  }
  throw Error(ErrorCode::kParse, "unknown sound class '" + std::string(name) + "'");
}

const Recording* Corpus::find(const std::string& id) const {
  for (const auto& r : recordings) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

Corpus load_corpus(const fs::path& root, const fs::path& annotations_path,
                   const fs::path& manifest_path, unsigned jobs) {
  std::ifstream manifest(manifest_path);
  if (!manifest) {
    throw Error(ErrorCode::kMissingFile, "cannot open manifest: " + manifest_path.string());
  }
  const auto rows = csv::read(manifest,
                              {"recording_id", "file_path", "sound_class", "subject_id"},
                              manifest_path.string());

  Corpus corpus;
  std::map<std::string, std::size_t> index;
  for (const auto& row : rows) {
    const std::string where = manifest_path.string() + ":" + std::to_string(row.line);
    Recording r;
    r.id = row.fields[0];
    r.file_path = row.fields[1];
    r.subject_id = row.fields[3];
    try {
      r.sound_class = parse_sound_class(row.fields[2]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    if (r.id.empty()) throw Error(ErrorCode::kParse, where + ": empty recording_id");
    if (!index.try_emplace(r.id, corpus.recordings.size()).second) {
      throw Error(ErrorCode::kParse, where + ": duplicate recording_id '" + r.id + "'");
    }
    corpus.recordings.push_back(std::move(r));
  }

  parallel_for(corpus.recordings.size(), jobs, [&](std::size_t i) {
    auto& r = corpus.recordings[i];
    const fs::path file = root / r.file_path;
    if (!fs::exists(file)) {
      throw Error(ErrorCode::kMissingFile,
                  "recording '" + r.id + "': audio file not found: " + file.string());
    }
    try {
      r.audio = std::make_shared<const Audio>(read_wav(file.string()));
    } catch (const Error& e) {
      throw Error(e.code(), "recording '" + r.id + "': " + e.what());
    }
    if (r.audio->samples.empty()) {
      throw Error(ErrorCode::kUnreadableWav,
                  "recording '" + r.id + "': audio file has no samples");
    }
  });

  const EventRows annotations = read_event_csv_file(annotations_path.string());
  std::map<std::string, const std::vector<Event>*> by_id;
  for (const auto& [id, events] : annotations) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw Error(ErrorCode::kUnknownRecording,
                  "annotations reference unknown recording '" + id + "'");
    }
    const auto& r = corpus.recordings[it->second];
    if (r.sound_class != SoundClass::kCough) {
      throw Error(ErrorCode::kAnnotationOnNonCough,
                  "recording '" + id + "' is class " + to_string(r.sound_class) +
                      " but has cough annotations");
    }
    for (const auto& e : events) {
      if (e.offset > r.duration() + 1e-9) {
        std::ostringstream os;
        os << "recording '" << id << "': annotation (" << e.onset << ", "
           << e.offset << ") extends beyond the recording duration "
           << r.duration() << " s";
        throw Error(ErrorCode::kAnnotationOutOfRange, os.str());
      }
    }
    by_id[id] = &events;
  }
  for (auto& r : corpus.recordings) {
    auto it = by_id.find(r.id);
    r.reference = normalize_timeline(
        it == by_id.end() ? std::vector<Event>{} : *it->second, r.id, r.duration());
    if (r.sound_class == SoundClass::kCough && r.reference.events.empty()) {
      warn("cough recording '" + r.id + "' has no annotations");
    }
  }
  return corpus;
}

Corpus load_corpus(const fs::path& root, unsigned jobs) {
  return load_corpus(root, root / "annotations.csv", root / "manifest.csv", jobs);
}

void write_manifest(const fs::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write manifest: " + path.string());
  out << "recording_id,file_path,sound_class,subject_id\n";
  for (const auto& r : corpus.recordings) {
    out << csv::escape(r.id) << ',' << csv::escape(r.file_path) << ','
        << to_string(r.sound_class) << ',' << csv::escape(r.subject_id) << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

void write_corpus(const fs::path& root, const Corpus& corpus, WavEncoding encoding) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + root.string() + ": " + ec.message());
  std::vector<EventTimeline> refs;
  for (const auto& r : corpus.recordings) {
    const fs::path file = root / r.file_path;
    fs::create_directories(file.parent_path(), ec);
    write_wav(file.string(), *r.audio, encoding);
    refs.push_back(r.reference);
  }
  write_manifest(root / "manifest.csv", corpus);
  write_event_csv_file((root / "annotations.csv").string(), refs);
}

namespace {

void fnv1a(std::uint64_t& h, const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + file.string());
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
}

}  // namespace

std::string hash_corpus_files(const fs::path& root, const fs::path& annotations_path,
                              const fs::path& manifest_path) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv1a(h, manifest_path);
  fnv1a(h, annotations_path);
  std::ifstream manifest(manifest_path);
  const auto rows = csv::read(manifest,
                              {"recording_id", "file_path", "sound_class", "subject_id"},
                              manifest_path.string());
  for (const auto& row : rows) fnv1a(h, root / row.fields[1]);
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

WindowSeries cut_windows(const Recording& recording, double window_length,
                         double overlap_fraction) {
  if (!(window_length > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "window length must be positive");
  }
  if (!(overlap_fraction >= 0 && overlap_fraction < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "overlap fraction must be in [0, 1)");
  }
  WindowSeries s;
  s.recording_id = recording.id;
  s.window_length = window_length;
  s.hop = window_length * (1.0 - overlap_fraction);
  s.recording_duration = recording.duration();
  const std::size_t n = window_count(s.recording_duration, window_length, s.hop);
  if (n == 0) {
    warn("recording '" + recording.id + "' is shorter than one " +
         csv::format_double(window_length) + " s window");
  }
  s.windows.resize(n);
  for (std::size_t k = 0; k < n; ++k) s.windows[k].start = static_cast<double>(k) * s.hop;
  return s;
}

void ScenarioSpec::validate() const {
  if (!(tolerance > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "scenario '" + name + "': tolerance must be > 0");
  }
  if (target_fractions.empty()) return;
  double sum = 0.0;
  for (const auto& [c, f] : target_fractions) {
    if (!(f >= 0) || !std::isfinite(f)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "scenario '" + name + "': negative fraction for " + to_string(c));
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument,
                "scenario '" + name + "': fractions sum to " + csv::format_double(sum));
  }
}

ScenarioSpec load_scenario_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open scenario: " + path.string());
  ScenarioSpec spec;
  try {
    const auto j = nlohmann::json::parse(in);
    spec.name = j.value("name", path.stem().string());
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.tolerance = j.value("tolerance", 0.01);
    if (j.contains("target_fractions")) {
      for (const auto& [key, value] : j.at("target_fractions").items()) {
        spec.target_fractions[parse_sound_class(key)] = value.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  spec.validate();
  return spec;
}

std::map<SoundClass, std::size_t> count_windows(const Corpus& corpus,
                                                double window_length) {
  std::map<SoundClass, std::size_t> counts;
  for (auto c : kAllSoundClasses) counts[c] = 0;
  for (const auto& r : corpus.recordings) {
    counts[r.sound_class] += window_count(r.duration(), window_length, window_length);
  }
  return counts;
}

namespace {

std::map<SoundClass, double> shares(const std::map<SoundClass, std::size_t>& counts) {
  std::size_t total = 0;
  for (const auto& [c, n] : counts) total += n;
  std::map<SoundClass, double> out;
  for (const auto& [c, n] : counts) {
    out[c] = total ? static_cast<double>(n) / static_cast<double>(total) : 0.0;
  }
  return out;
}

}  // namespace

ScenarioResult build_scenario(const Corpus& corpus, const ScenarioSpec& spec,
                              double window_length) {
  spec.validate();
  ScenarioResult result;
  const auto available = count_windows(corpus, window_length);
  if (spec.target_fractions.empty()) {
    result.subset = corpus;
    result.windows = available;
    result.achieved_fractions = shares(available);
    return result;
  }

  auto target = [&](SoundClass c) {
    auto it = spec.target_fractions.find(c);
    return it == spec.target_fractions.end() ? 0.0 : it->second;
  };

  // Cough windows are fixed, so they set the scale of the whole subset.
  double total_target = 0.0;
  if (target(SoundClass::kCough) > 0) {
    total_target = static_cast<double>(available.at(SoundClass::kCough)) /
                   target(SoundClass::kCough);
  } else {
    total_target = std::numeric_limits<double>::infinity();
    for (auto c : kAllSoundClasses) {
      if (c != SoundClass::kCough && target(c) > 0) {
        total_target = std::min(total_target,
                                static_cast<double>(available.at(c)) / target(c));
      }
    }
    if (!std::isfinite(total_target)) total_target = 0.0;
  }
  // Half the tolerance per class leaves room for the shared denominator.
  const double slack = 0.5 * spec.tolerance * total_target;

  Rng rng(spec.seed);
  std::set<std::size_t> removed;
  auto windows = available;
  for (auto c : kAllSoundClasses) {
    if (c == SoundClass::kCough) continue;
    const double goal = target(c) * total_target;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < corpus.recordings.size(); ++i) {
      if (corpus.recordings[i].sound_class == c) candidates.push_back(i);
    }
    while (static_cast<double>(windows[c]) - goal > slack && !candidates.empty()) {
      const auto pick = rng.index(candidates.size());
      const std::size_t i = candidates[pick];
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
      const auto w = window_count(corpus.recordings[i].duration(), window_length,
                                  window_length);
      if (static_cast<double>(windows[c] - w) >= goal - slack) {
        windows[c] -= w;
        removed.insert(i);
      }
    }
  }

  for (std::size_t i = 0; i < corpus.recordings.size(); ++i) {
    if (removed.count(i)) {
      result.removed_ids.push_back(corpus.recordings[i].id);
    } else {
      result.subset.recordings.push_back(corpus.recordings[i]);
    }
  }
  result.windows = windows;
  result.achieved_fractions = shares(windows);

  std::ostringstream diag;
  for (auto c : kAllSoundClasses) {
    const double got = result.achieved_fractions[c];
    if (std::abs(got - target(c)) > spec.tolerance + 1e-12) {
      diag << (result.reached ? " " : "; ") << to_string(c) << ": target " << target(c)
           << ", achieved " << got;
      result.reached = false;
    }
  }
  if (!result.reached) {
    result.diagnostic = "scenario '" + spec.name + "' target unreachable:" + diag.str();
    warn(result.diagnostic);
  }
  return result;
}

}  // namespace coughcount
