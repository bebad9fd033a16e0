#include <catch_amalgamated.hpp>

#include <cstring>
#include <fstream>

#include "coughcount/error.hpp"
#include "coughcount/wav.hpp"
#include "support.hpp"

using namespace coughcount;
using testing_support::TempDir;

namespace {

void put16(std::string& s, std::uint16_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>(v >> 8);
}
void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s += static_cast<char>((v >> (8 * i)) & 0xff);
}

// Minimal PCM file with the given header fields and raw data bytes.
std::string pcm_file(std::uint16_t channels, std::uint16_t bits, std::uint32_t rate,
                     const std::string& data, std::uint16_t format = 1) {
  std::string fmt;
  put16(fmt, format);
  put16(fmt, channels);
  put32(fmt, rate);
  put32(fmt, rate * channels * bits / 8);
  put16(fmt, static_cast<std::uint16_t>(channels * bits / 8));
  put16(fmt, bits);
  std::string body = "WAVE";
  body += "fmt ";
  put32(body, static_cast<std::uint32_t>(fmt.size()));
  body += fmt;
  body += "LIST";
  put32(body, 3);
  body += "abc";
  body += '\0';  // pad byte
  body += "data";
  put32(body, static_cast<std::uint32_t>(data.size()));
  body += data;
  std::string file = "RIFF";
  put32(file, static_cast<std::uint32_t>(body.size()));
  return file + body;
}

std::string save(const TempDir& dir, const std::string& name, const std::string& bytes) {
  const auto p = (dir.path() / name).string();
  std::ofstream(p, std::ios::binary) << bytes;
  return p;
}

ErrorCode read_error(const std::string& path) {
  try {
    read_wav(path);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("float32 round trip is exact") {
  TempDir dir("wav");
  Audio a;
  a.sample_rate = 16000.0;
  for (int i = 0; i < 1000; ++i) a.samples.push_back(static_cast<float>(std::sin(i * 0.1) * 0.7));
  const auto path = (dir.path() / "a.wav").string();
  write_wav(path, a);
  auto b = read_wav(path);
  CHECK(b.sample_rate == 16000.0);
  CHECK(b.samples == a.samples);
  CHECK(b.duration() == Catch::Approx(1000.0 / 16000.0));
}

TEST_CASE("pcm16 round trip within quantization") {
  TempDir dir("wav16");
  Audio a;
  a.sample_rate = 8000.0;
  for (int i = 0; i < 500; ++i) a.samples.push_back(static_cast<float>(std::cos(i * 0.05) * 0.9));
  const auto path = (dir.path() / "a.wav").string();
  write_wav(path, a, WavEncoding::kPcm16);
  auto b = read_wav(path);
  REQUIRE(b.samples.size() == a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    REQUIRE(std::abs(a.samples[i] - b.samples[i]) < 1.0 / 32767.0);
  }
}

TEST_CASE("hand-built pcm files decode") {
  TempDir dir("wavpcm");
  std::string d16;
  put16(d16, 0x4000);
  put16(d16, 0xC000);
  auto a = read_wav(save(dir, "a.wav", pcm_file(1, 16, 1000, d16)));
  REQUIRE(a.samples.size() == 2);
  CHECK(a.samples[0] == 0.5f);
  CHECK(a.samples[1] == -0.5f);

  std::string d8{static_cast<char>(128), static_cast<char>(255)};
  auto b = read_wav(save(dir, "b.wav", pcm_file(1, 8, 1000, d8)));
  CHECK(b.samples[0] == 0.0f);

  std::string d24{'\0', '\0', '\x40'};
  auto c = read_wav(save(dir, "c.wav", pcm_file(1, 24, 1000, d24)));
  CHECK(c.samples[0] == 0.5f);
}

TEST_CASE("wav errors") {
  TempDir dir("wavbad");
  CHECK(read_error((dir.path() / "nope.wav").string()) == ErrorCode::kMissingFile);
  CHECK(read_error(save(dir, "junk.wav", "not a wav file at all")) == ErrorCode::kUnreadableWav);
  std::string d(8, '\0');
  CHECK(read_error(save(dir, "stereo.wav", pcm_file(2, 16, 1000, d))) ==
        ErrorCode::kUnsupportedWav);
  auto truncated = pcm_file(1, 16, 1000, d);
  truncated.resize(truncated.size() - 20);
  CHECK(read_error(save(dir, "short.wav", truncated)) == ErrorCode::kUnreadableWav);
}
