#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "specex/audio.hpp"
#include "specex/matrix.hpp"

namespace specex {

enum class WindowKind { Hann };

// Analysis framing. No centering: frame i covers samples
// [i*hop, i*hop + n_fft), trailing partial frames are dropped, so
// num_frames = (N - n_fft)/hop + 1 for N >= n_fft.
struct FrameConfig {
  std::size_t n_fft = 2048;  // power of two, >= 16
  std::size_t hop = 512;     // 0 < hop <= n_fft
  WindowKind window = WindowKind::Hann;

  void validate() const;  // throws InvalidParams
  std::size_t num_frames(std::size_t n_samples) const;  // throws TooShort
};

// Per-frame power spectrum (|X|^2) plus axis metadata.
struct Spectrogram {
  Matrix power;                    // [num_frames x num_bins], num_bins = n_fft/2+1
  std::vector<double> bin_freqs;   // bin_freqs[k] = k * sample_rate / n_fft
  std::vector<double> frame_times; // (i*hop + n_fft/2) / sample_rate
  FrameConfig config;
  int sample_rate = 0;

  std::size_t num_frames() const { return power.rows; }
  std::size_t num_bins() const { return power.cols; }
};

// Periodic Hann: w[k] = 0.5 - 0.5*cos(2*pi*k/n).
std::vector<double> hann_window(std::size_t n);

std::vector<std::vector<double>> frame_signal(std::span<const double> samples,
                                              const FrameConfig& cfg);

// Radix-2 iterative FFT with precomputed twiddles; reuse one plan when
// transforming many frames of the same length.
class RealFft {
 public:
  explicit RealFft(std::size_t n);  // n must be a power of two

  // One-sided DFT: X[k] = sum_t x[t] e^(-2*pi*i*k*t/n), k = 0..n/2.
  std::vector<std::complex<double>> forward(std::span<const double> frame) const;

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddles_;  // e^(-2*pi*i*j/n), j < n/2
  mutable std::vector<std::complex<double>> work_;
};

std::vector<std::complex<double>> fft_real(std::span<const double> frame);

// Direct O(n^2) evaluation of the same one-sided DFT. This is the shipped
// oracle for fft_real; it stays in the library on purpose.
std::vector<std::complex<double>> dft_naive(std::span<const double> frame);

Spectrogram power_spectrogram(std::span<const double> samples, int sample_rate,
                              const FrameConfig& cfg);
Spectrogram power_spectrogram(const AudioBuffer& buf, const FrameConfig& cfg);

}  // namespace specex
