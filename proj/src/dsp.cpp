#include "specex/dsp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "specex/errors.hpp"

namespace specex {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void FrameConfig::validate() const {
  if (!is_power_of_two(n_fft) || n_fft < 16)
    throw Error("InvalidParams", "n_fft must be a power of two >= 16, got " +
                                     std::to_string(n_fft));
  if (hop == 0 || hop > n_fft)
    throw Error("InvalidParams", "hop must satisfy 0 < hop <= n_fft, got " +
                                     std::to_string(hop));
}

std::size_t FrameConfig::num_frames(std::size_t n_samples) const {
  if (n_samples < n_fft)
    throw Error("TooShort", "signal of " + std::to_string(n_samples) +
                                " samples is shorter than one frame (" +
                                std::to_string(n_fft) + ")");
  return (n_samples - n_fft) / hop + 1;
}

std::vector<double> hann_window(std::size_t n) {
  if (n < 1) throw Error("InvalidParams", "window length must be >= 1");
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k)
    w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                static_cast<double>(n));
  return w;
}

std::vector<std::vector<double>> frame_signal(std::span<const double> samples,
                                              const FrameConfig& cfg) {
  cfg.validate();
  const std::size_t frames = cfg.num_frames(samples.size());
  std::vector<std::vector<double>> out(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    auto begin = samples.begin() + static_cast<std::ptrdiff_t>(i * cfg.hop);
    out[i].assign(begin, begin + static_cast<std::ptrdiff_t>(cfg.n_fft));
  }
  return out;
}

RealFft::RealFft(std::size_t n) : n_(n) {
  if (!is_power_of_two(n))
    throw Error("InvalidParams",
                "FFT length must be a power of two, got " + std::to_string(n));
  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bitrev_[i] = r;
  }
  twiddles_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    double a = -2.0 * std::numbers::pi * static_cast<double>(j) /
               static_cast<double>(n);
    twiddles_[j] = {std::cos(a), std::sin(a)};
  }
  work_.resize(n);
}

std::vector<std::complex<double>> RealFft::forward(
    std::span<const double> frame) const {
  if (frame.size() != n_)
    throw Error("InvalidParams", "frame length " + std::to_string(frame.size()) +
                                     " does not match plan size " +
                                     std::to_string(n_));
  if (n_ == 1) return {std::complex<double>(frame[0], 0.0)};

  auto& a = work_;
  for (std::size_t i = 0; i < n_; ++i) a[bitrev_[i]] = frame[i];

  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const std::complex<double> w = twiddles_[j * step];
        const std::complex<double> u = a[start + j];
        const std::complex<double> t = w * a[start + j + half];
        a[start + j] = u + t;
        a[start + j + half] = u - t;
      }
    }
  }

  std::vector<std::complex<double>> out(n_ / 2 + 1);
  for (std::size_t k = 0; k <= n_ / 2; ++k) out[k] = a[k];
  return out;
}

std::vector<std::complex<double>> fft_real(std::span<const double> frame) {
  return RealFft(frame.size()).forward(frame);
}

std::vector<std::complex<double>> dft_naive(std::span<const double> frame) {
  const std::size_t n = frame.size();
  if (n < 1) throw Error("InvalidParams", "empty frame");
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                     static_cast<double>(t) / static_cast<double>(n);
      re += frame[t] * std::cos(angle);
      im += frame[t] * std::sin(angle);
    }
    out[k] = {re, im};
  }
  return out;
}

Spectrogram power_spectrogram(std::span<const double> samples, int sample_rate,
                              const FrameConfig& cfg) {
  cfg.validate();
  if (sample_rate <= 0) throw Error("InvalidParams", "sample_rate must be > 0");
  const std::size_t frames = cfg.num_frames(samples.size());
  const std::size_t bins = cfg.n_fft / 2 + 1;

  Spectrogram spec;
  spec.config = cfg;
  spec.sample_rate = sample_rate;
  spec.power = Matrix(frames, bins);
  spec.bin_freqs.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    spec.bin_freqs[k] = static_cast<double>(k) * sample_rate /
                        static_cast<double>(cfg.n_fft);
  spec.frame_times.resize(frames);

  const std::vector<double> window = hann_window(cfg.n_fft);
  const RealFft fft(cfg.n_fft);
  std::vector<double> frame(cfg.n_fft);

  for (std::size_t i = 0; i < frames; ++i) {
    const double* src = samples.data() + i * cfg.hop;
    for (std::size_t t = 0; t < cfg.n_fft; ++t) frame[t] = window[t] * src[t];
    const auto spectrum = fft.forward(frame);
    auto row = spec.power.row(i);
    for (std::size_t k = 0; k < bins; ++k) row[k] = std::norm(spectrum[k]);
    spec.frame_times[i] =
        (static_cast<double>(i * cfg.hop) + cfg.n_fft / 2.0) / sample_rate;
  }
  return spec;
}

Spectrogram power_spectrogram(const AudioBuffer& buf, const FrameConfig& cfg) {
  return power_spectrogram(std::span<const double>(buf.samples), buf.sample_rate,
                           cfg);
}

}  // namespace specex
