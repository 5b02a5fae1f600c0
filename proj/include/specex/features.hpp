#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "specex/audio.hpp"
#include "specex/dsp.hpp"
#include "specex/matrix.hpp"
#include "specex/segmentation.hpp"

namespace specex {

// The 26-value aggregate row written to the features CSV: mean chroma, RMS,
// centroid, bandwidth, roll-off, ZCR, then 20 MFCCs.
struct FeatureVector {
  double chroma_stft = 0.0;
  double rmse = 0.0;
  double spectral_centroid = 0.0;
  double spectral_bandwidth = 0.0;
  double rolloff = 0.0;
  double zero_crossing_rate = 0.0;
  std::array<double, 20> mfcc{};

  static constexpr std::size_t kSize = 26;

  std::array<double, kSize> values() const;
  static FeatureVector from_values(const std::array<double, kSize>& v);
  static const std::array<std::string, kSize>& names();
};

inline constexpr double kMfccLogFloor = 1e-10;
inline constexpr double kChromaFMin = 27.5;  // Hz; bins below are ignored

// Per-frame series are Matrix [num_frames x d]; d = 1 for the scalars,
// 12 for chroma, n_mfcc for MFCC.

// Fraction of adjacent sample pairs in each frame with opposite sign,
// normalized by frame length; sign(0) counts as non-negative.
Matrix zero_crossing_rate(std::span<const double> samples, const FrameConfig& cfg);
Matrix zero_crossing_rate(const AudioBuffer& buf, const FrameConfig& cfg);

// Per-frame sqrt(mean(x^2)) over the raw (unwindowed) samples.
Matrix rms_energy(std::span<const double> samples, const FrameConfig& cfg);
Matrix rms_energy(const AudioBuffer& buf, const FrameConfig& cfg);

// Magnitude-weighted mean frequency; all-zero frames give 0.
Matrix spectral_centroid(const Spectrogram& spec);

// p-th order magnitude-weighted spread around the centroid.
Matrix spectral_bandwidth(const Spectrogram& spec, double order = 2.0);

// Smallest bin frequency below which `threshold` of the frame's power lies.
Matrix spectral_rolloff(const Spectrogram& spec, double threshold = 0.85);

// Triangular filters with unit peaks, centers equally spaced on the HTK mel
// scale mel(f) = 2595*log10(1 + f/700) between 0 Hz and Nyquist.
Matrix mel_filterbank(std::size_t n_mels, int sample_rate, std::size_t n_fft);

// Orthonormal DCT-II matrix truncated to the first `n_out` rows.
Matrix dct_ii_orthonormal(std::size_t n_out, std::size_t n);

// First n_mfcc orthonormal DCT-II coefficients of ln(max(mel_energy, 1e-10)).
Matrix mfcc(const Spectrogram& spec, std::size_t n_mfcc = 20,
            std::size_t n_mels = 128);

// 12-class pitch profile: each bin's power lands in
// (round(12*log2(f/440)) + 9) mod 12; per-frame max-normalized.
Matrix chroma_stft(const Spectrogram& spec);

// Per-dimension arithmetic mean over frames.
std::vector<double> aggregate(const Matrix& series);

// Slices the buffer to the segment (a view - never a copy or a separate code
// path), computes one power spectrogram, and derives all seven features.
FeatureVector extract_feature_vector(const AudioBuffer& buf, const Segment& segment,
                                     const FrameConfig& cfg);
FeatureVector extract_feature_vector(std::span<const double> samples,
                                     int sample_rate, const FrameConfig& cfg);

}  // namespace specex
