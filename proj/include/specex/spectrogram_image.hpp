#pragma once

#include <filesystem>
#include <string>

#include "specex/dsp.hpp"

namespace specex {

// Binary PGM (P5) rendering of a power spectrogram: width = frames,
// height = bins with bin 0 at the bottom row. Pixels map
// db = 10*log10(power + 1e-10) linearly onto 0..255 over [db_max - 80, db_max].
std::string spectrogram_pgm(const Spectrogram& spec);
void write_spectrogram_pgm(const std::filesystem::path& path,
                           const Spectrogram& spec);

}  // namespace specex
