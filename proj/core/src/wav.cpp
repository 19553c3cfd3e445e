#include "acbench/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "acbench/error.hpp"

namespace acbench::signal {
namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff),
                              static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

void put16(std::ostream& out, std::uint16_t v) {
  const std::array<char, 2> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b.data(), 2);
}

[[noreturn]] void fail(const std::string& name, const std::string& why) {
  throw FormatError(name + ": " + why);
}

}  // namespace

AudioSignal read_wav(std::istream& in, const std::string& name) {
  std::array<unsigned char, 12> riff{};
  if (!in.read(reinterpret_cast<char*>(riff.data()), riff.size())) fail(name, "truncated header");
  if (std::string(riff.begin(), riff.begin() + 4) != "RIFF" ||
      std::string(riff.begin() + 8, riff.end()) != "WAVE") {
    fail(name, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint32_t sample_rate = 0;
  std::vector<double> samples;
  bool have_data = false;

  std::array<unsigned char, 8> chunk{};
  while (in.read(reinterpret_cast<char*>(chunk.data()), chunk.size())) {
    const std::string id(chunk.begin(), chunk.begin() + 4);
    const std::uint32_t size = le32(chunk.data() + 4);
    std::vector<unsigned char> body(size);
    if (!in.read(reinterpret_cast<char*>(body.data()), size)) fail(name, "truncated chunk '" + id + "'");
    if (size % 2 == 1) in.ignore(1);

    if (id == "fmt ") {
      if (size < 16) fail(name, "fmt chunk too short");
      const std::uint16_t format = le16(body.data());
      const std::uint16_t channels = le16(body.data() + 2);
      sample_rate = le32(body.data() + 4);
      const std::uint16_t bits = le16(body.data() + 14);
      if (format != 1) fail(name, "unsupported WAV format code " + std::to_string(format) + " (PCM only)");
      if (channels != 1) {
        fail(name, "unsupported channel count " + std::to_string(channels) + " (mono only)");
      }
      if (bits != 16) fail(name, "unsupported bit depth " + std::to_string(bits) + " (16-bit only)");
      if (sample_rate == 0) fail(name, "sample rate is zero");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) fail(name, "data chunk precedes fmt chunk");
      samples.resize(size / 2);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(le16(body.data() + 2 * i));
        samples[i] = static_cast<double>(v) / 32768.0;
      }
      have_data = true;
    }
  }
  if (!have_fmt) fail(name, "missing fmt chunk");
  if (!have_data) fail(name, "missing data chunk");
  if (samples.empty()) fail(name, "no samples");
  return AudioSignal(std::move(samples), static_cast<double>(sample_rate));
}

AudioSignal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  return read_wav(in, path.string());
}

std::size_t write_wav(std::ostream& out, const AudioSignal& x) {
  const auto rate = static_cast<std::uint32_t>(std::lround(x.sample_rate_hz()));
  const auto data_bytes = static_cast<std::uint32_t>(x.size() * 2);
  out.write("RIFF", 4);
  put32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * 2);
  put16(out, 2);
  put16(out, 16);
  out.write("data", 4);
  put32(out, data_bytes);

  std::size_t clipped = 0;
  for (double v : x.samples()) {
    double scaled = std::round(v * 32768.0);
    if (scaled > 32767.0 || scaled < -32768.0) {
      ++clipped;
      scaled = std::clamp(scaled, -32768.0, 32767.0);
    }
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  if (!out) throw FormatError("write_wav: stream error");
  return clipped;
}

std::size_t write_wav(const std::filesystem::path& path, const AudioSignal& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  return write_wav(out, x);
}

}  // namespace acbench::signal
