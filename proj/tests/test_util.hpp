#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "specex/audio.hpp"
#include "specex/rng.hpp"

namespace testutil {

// Plain sine tone, written directly from the formula so tests do not depend
// on the corpus generator.
inline specex::AudioBuffer sine_tone(double freq_hz, double amplitude,
                                     double duration_s, int sample_rate,
                                     double phase = 0.0) {
  specex::AudioBuffer buf;
  buf.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  buf.samples.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    buf.samples[t] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                              static_cast<double>(t) / sample_rate +
                                          phase);
  return buf;
}

// Fresh scratch directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    specex::Xorshift64Star rng(
        static_cast<std::uint64_t>(
            std::chrono::steady_clock::now().time_since_epoch().count()) +
        counter++);
    path_ = std::filesystem::temp_directory_path() /
            ("specex-" + tag + "-" + std::to_string(rng.next()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
