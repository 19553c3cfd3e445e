#pragma once

#include <filesystem>
#include <iosfwd>

#include "acbench/signal.hpp"

namespace acbench::signal {

/// Reads a RIFF/WAVE file holding 16-bit little-endian PCM mono audio.
/// Samples are mapped to [-1, 1) by dividing by 32768. Any other encoding,
/// including multichannel audio, raises FormatError naming the file.
AudioSignal read_wav(const std::filesystem::path& path);
AudioSignal read_wav(std::istream& in, const std::string& name = "<stream>");

/// Writes 16-bit PCM mono. Samples are scaled by 32768, rounded and clipped
/// to the int16 range; returns the number of clipped samples.
std::size_t write_wav(const std::filesystem::path& path, const AudioSignal& x);
std::size_t write_wav(std::ostream& out, const AudioSignal& x);

}  // namespace acbench::signal
