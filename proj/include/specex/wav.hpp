#pragma once

#include <filesystem>

#include "specex/audio.hpp"

namespace specex {

// Reads a RIFF/WAVE file. Only PCM, 16-bit, mono is accepted; anything else
// throws UnsupportedFormat rather than being silently downmixed or resampled.
// Samples are normalized as int16 / 32768, so -32768 maps exactly to -1.0.
// Chunks other than fmt/data are skipped. A data chunk whose declared size
// exceeds the bytes actually present is rejected as MalformedWav.
AudioBuffer read_wav(const std::filesystem::path& path);

// Writes a canonical 44-byte-header PCM16 mono WAV. Samples are quantized
// as round(s * 32768) clamped to [-32768, 32767]; with the read-side divisor
// of 32768 this makes write(read(f)) bit-identical on sample data.
void write_wav(const std::filesystem::path& path, const AudioBuffer& buf);

}  // namespace specex
