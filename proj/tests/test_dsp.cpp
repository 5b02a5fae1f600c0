#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "specex/dsp.hpp"
#include "specex/errors.hpp"
#include "specex/rng.hpp"
#include "test_util.hpp"

using namespace specex;

TEST_CASE("hann window quarter points") {
  const auto w = hann_window(4);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w[3] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("hann window n=1") {
  const auto w = hann_window(1);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == 0.0);
}

TEST_CASE("hann window sums to n/2 for n=2048") {
  const auto w = hann_window(2048);
  double sum = 0.0;
  for (double v : w) sum += v;
  CHECK(sum == doctest::Approx(1024.0).epsilon(1e-12));
}

TEST_CASE("framing counts") {
  FrameConfig cfg{2048, 512};
  CHECK(cfg.num_frames(2048) == 1);
  CHECK(cfg.num_frames(4096) == 5);
  CHECK_THROWS_WITH_AS(cfg.num_frames(2047), doctest::Contains("TooShort"), Error);

  std::vector<double> x(4096, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const auto frames = frame_signal(x, cfg);
  REQUIRE(frames.size() == 5);
  CHECK(frames[0][0] == 0.0);
  CHECK(frames[1][0] == 512.0);   // frame i starts at i*hop
  CHECK(frames[4][2047] == 4095.0);
}

TEST_CASE("frame config validation") {
  const FrameConfig not_pow2{100, 10};
  const FrameConfig too_small{8, 4};
  const FrameConfig zero_hop{2048, 0};
  const FrameConfig big_hop{2048, 4096};
  const FrameConfig ok{2048, 2048};
  CHECK_THROWS_AS(not_pow2.validate(), Error);
  CHECK_THROWS_AS(too_small.validate(), Error);
  CHECK_THROWS_AS(zero_hop.validate(), Error);
  CHECK_THROWS_AS(big_hop.validate(), Error);
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("fft trivial spectra") {
  const std::vector<double> dc{1, 1, 1, 1};
  auto x = fft_real(dc);
  REQUIRE(x.size() == 3);
  CHECK(std::abs(x[0] - std::complex<double>(4, 0)) < 1e-12);
  CHECK(std::abs(x[1]) < 1e-12);
  CHECK(std::abs(x[2]) < 1e-12);

  const std::vector<double> nyq{1, -1, 1, -1};
  x = fft_real(nyq);
  CHECK(std::abs(x[0]) < 1e-12);
  CHECK(std::abs(x[1]) < 1e-12);
  CHECK(std::abs(x[2] - std::complex<double>(4, 0)) < 1e-12);
}

TEST_CASE("dft_naive trivial cases") {
  const std::vector<double> one{1.0};
  auto x = dft_naive(one);
  REQUIRE(x.size() == 1);
  CHECK(std::abs(x[0] - std::complex<double>(1, 0)) < 1e-15);

  const std::vector<double> zeros{0, 0, 0, 0};
  x = dft_naive(zeros);
  REQUIRE(x.size() == 3);
  for (const auto& v : x) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("fft matches the naive-DFT oracle on random frames") {
  Xorshift64Star rng(42);
  for (std::size_t len : {32u, 64u}) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(len);
      for (double& v : x) v = rng.uniform_pm1();
      const auto fast = fft_real(x);
      const auto slow = dft_naive(x);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t k = 0; k < fast.size(); ++k)
        CHECK(std::abs(fast[k] - slow[k]) < 1e-9);
    }
  }
}

TEST_CASE("fft linearity") {
  Xorshift64Star rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 64;
    std::vector<double> x(n), y(n), z(n);
    const double a = 3.0 * rng.uniform_pm1();
    const double b = 2.0 * rng.uniform_pm1();
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform_pm1();
      y[i] = rng.uniform_pm1();
      z[i] = a * x[i] + b * y[i];
    }
    const auto fx = fft_real(x);
    const auto fy = fft_real(y);
    const auto fz = fft_real(z);
    for (std::size_t k = 0; k < fz.size(); ++k)
      CHECK(std::abs(fz[k] - (a * fx[k] + b * fy[k])) < 1e-9);
  }
}

namespace {

// Parseval check over every frame of a spectrogram, against the raw samples.
void check_parseval(const AudioBuffer& buf, const FrameConfig& cfg) {
  const auto spec = power_spectrogram(buf, cfg);
  const auto window = hann_window(cfg.n_fft);
  const double n = static_cast<double>(cfg.n_fft);
  for (std::size_t i = 0; i < spec.num_frames(); ++i) {
    double time_energy = 0.0;
    for (std::size_t t = 0; t < cfg.n_fft; ++t) {
      const double v = window[t] * buf.samples[i * cfg.hop + t];
      time_energy += v * v;
    }
    auto row = spec.power.row(i);
    double freq_energy = row[0] + row[row.size() - 1];
    for (std::size_t k = 1; k + 1 < row.size(); ++k) freq_energy += 2.0 * row[k];
    freq_energy /= n;
    CHECK(std::abs(time_energy - freq_energy) <=
          1e-6 * std::max(1e-12, std::abs(time_energy)));
  }
}

}  // namespace

TEST_CASE("power spectrogram basics") {
  FrameConfig cfg{2048, 512};

  SUBCASE("zero signal gives zero power") {
    AudioBuffer buf;
    buf.sample_rate = 22050;
    buf.samples.assign(4096, 0.0);
    const auto spec = power_spectrogram(buf, cfg);
    CHECK(spec.num_frames() == 5);
    CHECK(spec.num_bins() == 1025);
    for (double p : spec.power.data) CHECK(p == 0.0);
    CHECK(spec.bin_freqs.front() == 0.0);
    CHECK(spec.bin_freqs.back() == doctest::Approx(11025.0));
  }

  SUBCASE("sinusoid at an exact bin peaks there") {
    const int sr = 22050;
    const double f8 = 8.0 * sr / 2048.0;
    const auto buf = testutil::sine_tone(f8, 0.9, 0.5, sr);
    const auto spec = power_spectrogram(buf, cfg);
    auto row = spec.power.row(0);
    std::size_t argmax = 0;
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k] > row[argmax]) argmax = k;
    CHECK(argmax == 8);
  }

  SUBCASE("Parseval holds on every frame of random clips") {
    Xorshift64Star rng(99);
    for (int clip = 0; clip < 10; ++clip) {
      AudioBuffer buf;
      buf.sample_rate = 8000;
      buf.samples.resize(3000 + 500 * static_cast<std::size_t>(clip));
      for (double& s : buf.samples) s = rng.uniform_pm1();
      check_parseval(buf, FrameConfig{1024, 256});
    }
  }
}

TEST_CASE("spectrogram frame times follow hop and center") {
  AudioBuffer buf;
  buf.sample_rate = 22050;
  buf.samples.assign(4096, 0.1);
  const auto spec = power_spectrogram(buf, FrameConfig{2048, 512});
  CHECK(spec.frame_times[0] == doctest::Approx(1024.0 / 22050.0));
  CHECK(spec.frame_times[1] == doctest::Approx((512.0 + 1024.0) / 22050.0));
}

TEST_CASE("time shift by one hop shifts frames by one index") {
  const int sr = 8000;
  FrameConfig cfg{512, 128};
  Xorshift64Star rng(1234);
  AudioBuffer buf;
  buf.sample_rate = sr;
  buf.samples.resize(4000);
  for (double& s : buf.samples) s = rng.uniform_pm1();

  AudioBuffer delayed;
  delayed.sample_rate = sr;
  delayed.samples.assign(cfg.hop, 0.0);
  delayed.samples.insert(delayed.samples.end(), buf.samples.begin(),
                         buf.samples.end());

  const auto a = power_spectrogram(buf, cfg);
  const auto b = power_spectrogram(delayed, cfg);
  REQUIRE(b.num_frames() >= a.num_frames());
  for (std::size_t i = 0; i + 1 < a.num_frames(); ++i)
    for (std::size_t k = 0; k < a.num_bins(); ++k)
      CHECK(std::abs(a.power(i, k) - b.power(i + 1, k)) < 1e-9);
}

TEST_CASE("fft rejects non-power-of-two lengths") {
  std::vector<double> x(100, 0.0);
  CHECK_THROWS_AS(fft_real(x), Error);
}
