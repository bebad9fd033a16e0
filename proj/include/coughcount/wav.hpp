#pragma once

#include <span>
#include <string>
#include <vector>

namespace coughcount {

// Mono audio, samples nominally in [-1, 1].
struct Audio {
  std::vector<float> samples;
  double sample_rate = 0.0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

enum class WavEncoding { kPcm16, kFloat32 };

// Reads a mono RIFF/WAVE file: PCM 8/16/24/32-bit or IEEE float 32/64-bit,
// plain or WAVE_FORMAT_EXTENSIBLE. Multi-channel files are rejected
// (kUnsupportedWav), never downmixed. Missing files raise kMissingFile and
// malformed ones kUnreadableWav.
Audio read_wav(const std::string& path);

void write_wav(const std::string& path, const Audio& audio,
               WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace coughcount
