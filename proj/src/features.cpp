#include "specex/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "specex/errors.hpp"

namespace specex {

std::array<double, FeatureVector::kSize> FeatureVector::values() const {
  std::array<double, kSize> v{};
  v[0] = chroma_stft;
  v[1] = rmse;
  v[2] = spectral_centroid;
  v[3] = spectral_bandwidth;
  v[4] = rolloff;
  v[5] = zero_crossing_rate;
  for (std::size_t i = 0; i < mfcc.size(); ++i) v[6 + i] = mfcc[i];
  return v;
}

FeatureVector FeatureVector::from_values(const std::array<double, kSize>& v) {
  FeatureVector f;
  f.chroma_stft = v[0];
  f.rmse = v[1];
  f.spectral_centroid = v[2];
  f.spectral_bandwidth = v[3];
  f.rolloff = v[4];
  f.zero_crossing_rate = v[5];
  for (std::size_t i = 0; i < f.mfcc.size(); ++i) f.mfcc[i] = v[6 + i];
  return f;
}

const std::array<std::string, FeatureVector::kSize>& FeatureVector::names() {
  static const auto names = [] {
    std::array<std::string, kSize> n;
    n[0] = "chroma_stft";
    n[1] = "rmse";
    n[2] = "spectral_centroid";
    n[3] = "spectral_bandwidth";
    n[4] = "rolloff";
    n[5] = "zero_crossing_rate";
    for (std::size_t i = 0; i < 20; ++i) n[6 + i] = "mfcc" + std::to_string(i + 1);
    return n;
  }();
  return names;
}

Matrix zero_crossing_rate(std::span<const double> samples, const FrameConfig& cfg) {
  cfg.validate();
  const std::size_t frames = cfg.num_frames(samples.size());
  Matrix out(frames, 1);
  for (std::size_t i = 0; i < frames; ++i) {
    const double* f = samples.data() + i * cfg.hop;
    std::size_t crossings = 0;
    bool prev_neg = f[0] < 0.0;
    for (std::size_t t = 1; t < cfg.n_fft; ++t) {
      bool neg = f[t] < 0.0;
      crossings += neg != prev_neg;
      prev_neg = neg;
    }
    out(i, 0) = static_cast<double>(crossings) / static_cast<double>(cfg.n_fft);
  }
  return out;
}

Matrix zero_crossing_rate(const AudioBuffer& buf, const FrameConfig& cfg) {
  return zero_crossing_rate(std::span<const double>(buf.samples), cfg);
}

Matrix rms_energy(std::span<const double> samples, const FrameConfig& cfg) {
  cfg.validate();
  const std::size_t frames = cfg.num_frames(samples.size());
  Matrix out(frames, 1);
  for (std::size_t i = 0; i < frames; ++i) {
    const double* f = samples.data() + i * cfg.hop;
    double sum = 0.0;
    for (std::size_t t = 0; t < cfg.n_fft; ++t) sum += f[t] * f[t];
    out(i, 0) = std::sqrt(sum / static_cast<double>(cfg.n_fft));
  }
  return out;
}

Matrix rms_energy(const AudioBuffer& buf, const FrameConfig& cfg) {
  return rms_energy(std::span<const double>(buf.samples), cfg);
}

Matrix spectral_centroid(const Spectrogram& spec) {
  if (spec.power.empty()) throw Error("InvalidParams", "empty spectrogram");
  Matrix out(spec.num_frames(), 1);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    auto row = spec.power.row(i);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double m = std::sqrt(row[k]);
      num += spec.bin_freqs[k] * m;
      den += m;
    }
    out(i, 0) = den > 0.0 ? num / den : 0.0;
  }
  return out;
}

Matrix spectral_bandwidth(const Spectrogram& spec, double order) {
  if (spec.power.empty()) throw Error("InvalidParams", "empty spectrogram");
  if (order < 1.0) throw Error("InvalidOrder", "bandwidth order must be >= 1");
  const Matrix centroid = spectral_centroid(spec);
  Matrix out(spec.num_frames(), 1);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    auto row = spec.power.row(i);
    double total = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) total += std::sqrt(row[k]);
    if (total <= 0.0) {
      out(i, 0) = 0.0;
      continue;
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const double m = std::sqrt(row[k]) / total;
      acc += m * std::pow(std::abs(spec.bin_freqs[k] - centroid(i, 0)), order);
    }
    out(i, 0) = std::pow(acc, 1.0 / order);
  }
  return out;
}

Matrix spectral_rolloff(const Spectrogram& spec, double threshold) {
  if (spec.power.empty()) throw Error("InvalidParams", "empty spectrogram");
  if (threshold <= 0.0 || threshold > 1.0)
    throw Error("InvalidThreshold", "rolloff threshold must be in (0, 1]");
  Matrix out(spec.num_frames(), 1);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    auto row = spec.power.row(i);
    double total = 0.0;
    for (double p : row) total += p;
    if (total <= 0.0) {
      out(i, 0) = 0.0;
      continue;
    }
    const double target = threshold * total;
    double cum = 0.0;
    std::size_t k = 0;
    for (; k < row.size(); ++k) {
      cum += row[k];
      if (cum >= target) break;
    }
    if (k == row.size()) k = row.size() - 1;  // guard against round-off
    out(i, 0) = spec.bin_freqs[k];
  }
  return out;
}

namespace {

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

}  // namespace

Matrix mel_filterbank(std::size_t n_mels, int sample_rate, std::size_t n_fft) {
  if (n_mels < 2) throw Error("InvalidParams", "need at least 2 mel bands");
  if (sample_rate <= 0) throw Error("InvalidParams", "sample_rate must be > 0");
  const std::size_t bins = n_fft / 2 + 1;
  const double nyquist = sample_rate / 2.0;

  // n_mels centers plus anchors at 0 Hz and Nyquist, equally spaced in mel.
  std::vector<double> edges(n_mels + 2);
  const double mel_max = hz_to_mel(nyquist);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(mel_max * static_cast<double>(i) /
                         static_cast<double>(n_mels + 1));

  Matrix fb(n_mels, bins);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate /
                       static_cast<double>(n_fft);
      double w = 0.0;
      if (f > lo && f < hi)
        w = f <= center ? (f - lo) / (center - lo) : (hi - f) / (hi - center);
      fb(m, k) = w;
    }
  }
  return fb;
}

Matrix dct_ii_orthonormal(std::size_t n_out, std::size_t n) {
  if (n == 0 || n_out == 0 || n_out > n)
    throw Error("InvalidParams", "bad DCT dimensions");
  Matrix d(n_out, n);
  for (std::size_t j = 0; j < n_out; ++j) {
    const double scale = j == 0 ? std::sqrt(1.0 / static_cast<double>(n))
                                : std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m)
      d(j, m) = scale * std::cos(std::numbers::pi * static_cast<double>(j) *
                                 (2.0 * static_cast<double>(m) + 1.0) /
                                 (2.0 * static_cast<double>(n)));
  }
  return d;
}

namespace {

// Compact filter rows: contiguous nonzero span per filter. Each FFT bin sits
// in at most two triangles, so this turns the mel projection from a dense
// n_mels x bins product into ~2*bins multiplies per frame.
struct SparseFilter {
  std::size_t begin = 0;
  std::vector<double> weights;
};

std::vector<SparseFilter> sparsify(const Matrix& fb) {
  std::vector<SparseFilter> out(fb.rows);
  for (std::size_t m = 0; m < fb.rows; ++m) {
    auto row = fb.row(m);
    std::size_t lo = 0, hi = row.size();
    while (lo < hi && row[lo] == 0.0) ++lo;
    while (hi > lo && row[hi - 1] == 0.0) --hi;
    out[m].begin = lo;
    out[m].weights.assign(row.begin() + static_cast<std::ptrdiff_t>(lo),
                          row.begin() + static_cast<std::ptrdiff_t>(hi));
  }
  return out;
}

}  // namespace

Matrix mfcc(const Spectrogram& spec, std::size_t n_mfcc, std::size_t n_mels) {
  if (spec.power.empty()) throw Error("InvalidParams", "empty spectrogram");
  if (n_mfcc == 0 || n_mfcc > n_mels)
    throw Error("InvalidParams", "need 0 < n_mfcc <= n_mels");
  const auto filters =
      sparsify(mel_filterbank(n_mels, spec.sample_rate, spec.config.n_fft));
  const Matrix dct = dct_ii_orthonormal(n_mfcc, n_mels);

  Matrix out(spec.num_frames(), n_mfcc);
  std::vector<double> loge(n_mels);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    auto row = spec.power.row(i);
    for (std::size_t m = 0; m < n_mels; ++m) {
      const auto& f = filters[m];
      double e = 0.0;
      for (std::size_t j = 0; j < f.weights.size(); ++j)
        e += f.weights[j] * row[f.begin + j];
      loge[m] = std::log(std::max(e, kMfccLogFloor));
    }
    for (std::size_t j = 0; j < n_mfcc; ++j) {
      auto drow = dct.row(j);
      double c = 0.0;
      for (std::size_t m = 0; m < n_mels; ++m) c += drow[m] * loge[m];
      out(i, j) = c;
    }
  }
  return out;
}

Matrix chroma_stft(const Spectrogram& spec) {
  if (spec.power.empty()) throw Error("InvalidParams", "empty spectrogram");
  const std::size_t bins = spec.num_bins();

  std::vector<int> pitch_class(bins, -1);
  for (std::size_t k = 0; k < bins; ++k) {
    const double f = spec.bin_freqs[k];
    if (f < kChromaFMin) continue;
    const auto semitones =
        static_cast<long long>(std::llround(12.0 * std::log2(f / 440.0)));
    pitch_class[k] = static_cast<int>(((semitones + 9) % 12 + 12) % 12);
  }

  Matrix out(spec.num_frames(), 12);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    auto row = spec.power.row(i);
    auto chroma = out.row(i);
    for (std::size_t k = 0; k < bins; ++k)
      if (pitch_class[k] >= 0) chroma[pitch_class[k]] += row[k];
    const double peak = *std::max_element(chroma.begin(), chroma.end());
    if (peak > 0.0)
      for (double& c : chroma) c /= peak;
  }
  return out;
}

std::vector<double> aggregate(const Matrix& series) {
  if (series.rows == 0) throw Error("EmptySeries", "no frames to aggregate");
  std::vector<double> mean(series.cols, 0.0);
  for (std::size_t i = 0; i < series.rows; ++i) {
    auto row = series.row(i);
    for (std::size_t d = 0; d < series.cols; ++d) mean[d] += row[d];
  }
  for (double& v : mean) v /= static_cast<double>(series.rows);
  return mean;
}

FeatureVector extract_feature_vector(std::span<const double> samples,
                                     int sample_rate, const FrameConfig& cfg) {
  if (samples.empty()) throw Error("EmptySegment", "segment has no samples");
  if (samples.size() < cfg.n_fft)
    throw Error("TooShort", "segment of " + std::to_string(samples.size()) +
                                " samples is shorter than n_fft=" +
                                std::to_string(cfg.n_fft));

  const Spectrogram spec = power_spectrogram(samples, sample_rate, cfg);

  FeatureVector fv;
  const auto chroma_mean = aggregate(chroma_stft(spec));
  double chroma_sum = 0.0;
  for (double c : chroma_mean) chroma_sum += c;
  fv.chroma_stft = chroma_sum / 12.0;

  fv.rmse = aggregate(rms_energy(samples, cfg))[0];
  fv.spectral_centroid = aggregate(spectral_centroid(spec))[0];
  fv.spectral_bandwidth = aggregate(spectral_bandwidth(spec))[0];
  fv.rolloff = aggregate(spectral_rolloff(spec))[0];
  fv.zero_crossing_rate = aggregate(zero_crossing_rate(samples, cfg))[0];

  const auto mfcc_mean = aggregate(mfcc(spec));
  for (std::size_t i = 0; i < fv.mfcc.size(); ++i) fv.mfcc[i] = mfcc_mean[i];
  return fv;
}

FeatureVector extract_feature_vector(const AudioBuffer& buf, const Segment& segment,
                                     const FrameConfig& cfg) {
  if (segment.start_sample < 0 ||
      segment.end_sample > static_cast<std::int64_t>(buf.samples.size()) ||
      segment.length() < 1)
    throw Error("EmptySegment", "segment does not fit the clip");
  std::span<const double> view(buf.samples.data() + segment.start_sample,
                               static_cast<std::size_t>(segment.length()));
  return extract_feature_vector(view, buf.sample_rate, cfg);
}

}  // namespace specex
