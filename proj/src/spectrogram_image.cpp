#include "specex/spectrogram_image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "specex/errors.hpp"

namespace specex {

std::string spectrogram_pgm(const Spectrogram& spec) {
  if (spec.power.empty()) throw Error("InvalidParams", "empty spectrogram");
  const std::size_t width = spec.num_frames();
  const std::size_t height = spec.num_bins();

  double db_max = -1e300;
  Matrix db(width, height);
  for (std::size_t i = 0; i < width; ++i)
    for (std::size_t k = 0; k < height; ++k) {
      const double v = 10.0 * std::log10(spec.power(i, k) + 1e-10);
      db(i, k) = v;
      db_max = std::max(db_max, v);
    }
  const double db_min = db_max - 80.0;

  std::string out = "P5\n" + std::to_string(width) + " " +
                    std::to_string(height) + "\n255\n";
  out.reserve(out.size() + width * height);
  for (std::size_t r = 0; r < height; ++r) {
    const std::size_t bin = height - 1 - r;  // bin 0 at the bottom
    for (std::size_t c = 0; c < width; ++c) {
      const double v = std::clamp(db(c, bin), db_min, db_max);
      const long pixel = std::lround(255.0 * (v - db_min) / 80.0);
      out.push_back(static_cast<char>(static_cast<unsigned char>(pixel)));
    }
  }
  return out;
}

void write_spectrogram_pgm(const std::filesystem::path& path,
                           const Spectrogram& spec) {
  const std::string bytes = spectrogram_pgm(spec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("IoError", "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("IoError", "write failed for " + path.string());
}

}  // namespace specex
