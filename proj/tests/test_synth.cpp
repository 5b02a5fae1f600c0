#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "specex/dsp.hpp"
#include "specex/errors.hpp"
#include "specex/features.hpp"
#include "specex/synth.hpp"
#include "test_util.hpp"

using namespace specex;

namespace {

GenreSpec tone_spec(double freq, double noise = 0.0) {
  GenreSpec s;
  s.name = "tone";
  s.fundamentals_hz = {freq};
  s.num_harmonics = 1;
  s.harmonic_decay = 1.0;
  s.noise_level = noise;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("degenerate spec is a pure sinusoid") {
  const int sr = 22050;
  const auto buf = gen_structured_clip(tone_spec(440.0), 1.0, sr, 99);
  REQUIRE(buf.samples.size() == 22050);

  // A pure sinusoid satisfies s[t+1] + s[t-1] = 2 cos(w) s[t] for all t.
  const double k = 2.0 * std::cos(2.0 * std::numbers::pi * 440.0 / sr);
  for (std::size_t t = 1; t + 1 < 4000; ++t)
    CHECK(std::abs(buf.samples[t + 1] + buf.samples[t - 1] - k * buf.samples[t]) <
          1e-9);

  double peak = 0.0;
  for (double s : buf.samples) peak = std::max(peak, std::abs(s));
  CHECK(peak <= 1.0);
  CHECK(peak > 0.9);  // full amplitude budget with zero noise
}

TEST_CASE("generation is deterministic") {
  const auto a = gen_structured_clip(tone_spec(330.0, 0.3), 0.7, 22050, 1234);
  const auto b = gen_structured_clip(tone_spec(330.0, 0.3), 0.7, 22050, 1234);
  CHECK(a.samples == b.samples);

  const auto c = gen_structured_clip(tone_spec(330.0, 0.3), 0.7, 22050, 1235);
  CHECK(a.samples != c.samples);
}

TEST_CASE("noisy structured clip is stationary across halves") {
  GenreSpec spec = tone_spec(220.0, 0.2);
  spec.num_harmonics = 4;
  spec.harmonic_decay = 0.6;
  const auto buf = gen_structured_clip(spec, 4.0, 22050, 7);

  const auto rms_of = [&](std::size_t begin, std::size_t end) {
    double sq = 0.0;
    for (std::size_t t = begin; t < end; ++t) sq += buf.samples[t] * buf.samples[t];
    return std::sqrt(sq / static_cast<double>(end - begin));
  };
  const std::size_t half = buf.samples.size() / 2;
  const double first = rms_of(0, half);
  const double second = rms_of(half, buf.samples.size());
  CHECK(std::abs(first - second) / second < 0.05);
}

TEST_CASE("harmonics at or above Nyquist are dropped") {
  GenreSpec spec = tone_spec(6000.0);
  spec.num_harmonics = 3;  // 12 kHz and 18 kHz are beyond Nyquist at 22050
  spec.harmonic_decay = 0.9;
  const auto buf = gen_structured_clip(spec, 0.5, 22050, 3);
  const double k = 2.0 * std::cos(2.0 * std::numbers::pi * 6000.0 / 22050.0);
  for (std::size_t t = 1; t + 1 < 2000; ++t)
    CHECK(std::abs(buf.samples[t + 1] + buf.samples[t - 1] - k * buf.samples[t]) <
          1e-9);
}

TEST_CASE("invalid specs are rejected") {
  GenreSpec empty;
  empty.name = "empty";
  CHECK_THROWS_WITH_AS(gen_structured_clip(empty, 1.0, 22050, 1),
                       doctest::Contains("InvalidSpec"), Error);

  GenreSpec noisy = tone_spec(440.0);
  noisy.noise_level = 1.0;
  CHECK_THROWS_WITH_AS(gen_structured_clip(noisy, 1.0, 22050, 1),
                       doctest::Contains("InvalidSpec"), Error);

  CHECK_THROWS_WITH_AS(gen_structured_clip(tone_spec(440.0), 0.0, 22050, 1),
                       doctest::Contains("InvalidSpec"), Error);
}

TEST_CASE("unstructured clip length and sectioning") {
  const int sr = 22050;

  SUBCASE("length is the sum of section lengths") {
    const std::vector<Section> sections = {{tone_spec(220.0), 5.0},
                                           {tone_spec(1760.0), 5.0}};
    const auto buf = gen_unstructured_clip(sections, sr, 44);
    CHECK(buf.samples.size() == 10u * sr);
    double peak = 0.0;
    for (double s : buf.samples) peak = std::max(peak, std::abs(s));
    CHECK(peak <= 1.0);
  }

  SUBCASE("spectral centroid moves with the sections") {
    const std::vector<Section> sections = {{tone_spec(220.0), 5.0},
                                           {tone_spec(1760.0), 5.0}};
    const auto buf = gen_unstructured_clip(sections, sr, 44);
    FrameConfig cfg{2048, 512};

    std::span<const double> all(buf.samples);
    const double first = aggregate(spectral_centroid(power_spectrogram(
        all.subspan(0, 4 * sr), sr, cfg)))[0];
    const double last = aggregate(spectral_centroid(power_spectrogram(
        all.subspan(buf.samples.size() - 4 * sr), sr, cfg)))[0];
    CHECK(first < last);
  }

  SUBCASE("one section is rejected") {
    const std::vector<Section> one = {{tone_spec(220.0), 5.0}};
    CHECK_THROWS_WITH_AS(gen_unstructured_clip(one, sr, 1),
                         doctest::Contains("InvalidSpec"), Error);
  }
}

TEST_CASE("palette and plan helpers") {
  SUBCASE("palette specs validate and differ across genres") {
    for (std::size_t g = 0; g < 8; ++g) {
      const auto spec = structured_palette_spec("g" + std::to_string(g), g);
      CHECK_NOTHROW(spec.validate());
    }
    const auto a = structured_palette_spec("a", 0);
    const auto b = structured_palette_spec("b", 1);
    CHECK(a.fundamentals_hz[0] != b.fundamentals_hz[0]);
  }

  SUBCASE("jitter is deterministic and small") {
    const auto base = structured_palette_spec("a", 2);
    const auto j1 = jitter_spec(base, 555);
    const auto j2 = jitter_spec(base, 555);
    CHECK(j1.fundamentals_hz == j2.fundamentals_hz);
    for (std::size_t i = 0; i < base.fundamentals_hz.size(); ++i)
      CHECK(std::abs(j1.fundamentals_hz[i] / base.fundamentals_hz[i] - 1.0) <=
            0.01);
  }

  SUBCASE("unstructured plans have 3-5 sections, shared intro, genre tail") {
    CorpusConfig cfg;
    cfg.genres = {"alpha", "beta", "gamma"};
    cfg.clips_per_genre = 4;
    cfg.duration_s = 60.0;
    cfg.structured = false;
    const auto plan = corpus_plan(cfg);
    for (const auto& clip : plan) {
      const auto sections = unstructured_sections(cfg, clip);
      CHECK(sections.size() >= 3);
      CHECK(sections.size() <= 5);
      CHECK(sections.front().spec.name == "intro");
      CHECK(sections.back().spec.name == clip.label);
      double total = 0.0;
      for (const auto& s : sections) total += s.duration_s;
      CHECK(total == doctest::Approx(cfg.duration_s).epsilon(1e-9));
      // The tail section always dominates the trailing 10% reference slot.
      CHECK(sections.back().duration_s >= 0.35 * cfg.duration_s);
    }
  }
}

TEST_CASE("corpus generation") {
  CorpusConfig cfg;
  cfg.genres = {"alpha", "beta"};
  cfg.clips_per_genre = 2;
  cfg.duration_s = 2.0;
  cfg.structured = true;
  cfg.master_seed = 77;
  cfg.sample_rate = 8000;

  SUBCASE("file count and manifest rows") {
    testutil::TempDir dir("corpus");
    const auto manifest = gen_corpus(cfg, dir.path());
    CHECK(manifest.entries.size() == 4);
    std::size_t wavs = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path()))
      wavs += e.path().extension() == ".wav";
    CHECK(wavs == 4);

    const auto parsed = read_manifest(dir.path() / "manifest.csv");
    REQUIRE(parsed.entries.size() == 4);
    CHECK(parsed.entries[0].filename == "alpha.00000.wav");
    CHECK(parsed.entries[0].label == "alpha");
    CHECK(parsed.entries[0].duration_s == 2.0);
    CHECK(parsed.entries[0].structured);
    CHECK(parsed.entries[3].label == "beta");
  }

  SUBCASE("same master seed reproduces every byte") {
    testutil::TempDir a("corpus");
    testutil::TempDir b("corpus");
    gen_corpus(cfg, a.path());
    gen_corpus(cfg, b.path());
    for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
      const auto name = entry.path().filename();
      CHECK(slurp(entry.path()) == slurp(b.path() / name));
    }
  }

  SUBCASE("different master seeds differ") {
    testutil::TempDir a("corpus");
    testutil::TempDir b("corpus");
    gen_corpus(cfg, a.path());
    auto cfg2 = cfg;
    cfg2.master_seed = 78;
    gen_corpus(cfg2, b.path());
    CHECK(slurp(a.path() / "alpha.00000.wav") !=
          slurp(b.path() / "alpha.00000.wav"));
  }

  SUBCASE("unstructured corpora carry a sections sidecar") {
    testutil::TempDir dir("corpus");
    auto ucfg = cfg;
    ucfg.structured = false;
    ucfg.duration_s = 4.0;
    gen_corpus(ucfg, dir.path());
    CHECK(std::filesystem::exists(dir.path() / "sections.csv"));
    const std::string sections = slurp(dir.path() / "sections.csv");
    CHECK(sections.find("intro") != std::string::npos);
    CHECK(sections.find("alpha") != std::string::npos);
  }

  SUBCASE("preconditions") {
    testutil::TempDir dir("corpus");
    auto bad = cfg;
    bad.genres = {"solo"};
    CHECK_THROWS_WITH_AS(gen_corpus(bad, dir.path()),
                         doctest::Contains("InvalidSpec"), Error);
    bad = cfg;
    bad.clips_per_genre = 1;
    CHECK_THROWS_AS(gen_corpus(bad, dir.path()), Error);
  }
}

TEST_CASE("corpus config parsing") {
  testutil::TempDir dir("config");
  const auto path = dir.path() / "corpus.cfg";

  SUBCASE("happy path with comments and spacing") {
    std::ofstream(path) << "# synthetic corpus\n"
                           "genres = alpha, beta ,gamma\n"
                           "clips_per_genre=5\n"
                           "duration_s = 12.5\n"
                           "structured = 0\n"
                           "master_seed = 99\n"
                           "sample_rate = 16000\n";
    const auto cfg = load_corpus_config(path);
    CHECK(cfg.genres == std::vector<std::string>{"alpha", "beta", "gamma"});
    CHECK(cfg.clips_per_genre == 5);
    CHECK(cfg.duration_s == 12.5);
    CHECK_FALSE(cfg.structured);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.sample_rate == 16000);
  }

  SUBCASE("unknown keys are rejected") {
    std::ofstream(path) << "genres = a,b\nvolume = 11\n";
    CHECK_THROWS_WITH_AS(load_corpus_config(path), doctest::Contains("ParseError"),
                         Error);
  }

  SUBCASE("missing genres is rejected") {
    std::ofstream(path) << "clips_per_genre = 5\n";
    CHECK_THROWS_WITH_AS(load_corpus_config(path), doctest::Contains("ParseError"),
                         Error);
  }
}
