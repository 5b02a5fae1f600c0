#include "specex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "specex/errors.hpp"
#include "specex/rng.hpp"
#include "specex/wav.hpp"

namespace specex {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAmDepth = 0.25;

struct Oscillator {
  std::complex<double> phase;
  std::complex<double> step;
  double amplitude;
};

// Renders `n` samples of the spec's process. Phase-rotation oscillators keep
// this fast enough for multi-minute corpora; |phase| is renormalized
// periodically to stop round-off drift.
std::vector<double> render_samples(const GenreSpec& spec, std::size_t n,
                                   int sample_rate, std::uint64_t seed) {
  Xorshift64Star rng(seed);

  std::vector<Oscillator> oscs;
  double amp_sum = 0.0;
  for (double f0 : spec.fundamentals_hz) {
    for (int h = 1; h <= spec.num_harmonics; ++h) {
      const double freq = f0 * h;
      if (freq >= sample_rate / 2.0) continue;  // drop, never alias
      const double amp = std::pow(spec.harmonic_decay, h - 1);
      const double phase = kTwoPi * rng.uniform01();
      oscs.push_back({std::polar(1.0, phase),
                      std::polar(1.0, kTwoPi * freq / sample_rate), amp});
      amp_sum += amp;
    }
  }
  const double tone_scale =
      amp_sum > 0.0 ? (1.0 - spec.noise_level) / amp_sum : 0.0;

  const bool has_am = spec.am_rate_hz > 0.0;
  std::complex<double> am_phase = std::polar(1.0, kTwoPi * rng.uniform01());
  const std::complex<double> am_step =
      has_am ? std::polar(1.0, kTwoPi * spec.am_rate_hz / sample_rate)
             : std::complex<double>(1.0, 0.0);

  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double tone = 0.0;
    for (auto& o : oscs) {
      tone += o.amplitude * o.phase.imag();
      o.phase *= o.step;
    }
    double mod = 1.0;
    if (has_am) {
      mod = (1.0 - kAmDepth) + kAmDepth * am_phase.real();
      am_phase *= am_step;
    }
    double s = tone_scale * mod * tone;
    if (spec.noise_level > 0.0) s += spec.noise_level * rng.uniform_pm1();
    out[t] = s;

    if ((t & 0xFFFF) == 0xFFFF) {
      for (auto& o : oscs) o.phase /= std::abs(o.phase);
      if (has_am) am_phase /= std::abs(am_phase);
    }
  }
  return out;
}

std::size_t duration_to_samples(double duration_s, int sample_rate) {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

}  // namespace

void GenreSpec::validate() const {
  if (fundamentals_hz.empty())
    throw Error("InvalidSpec", "spec '" + name + "' has no fundamentals");
  for (double f : fundamentals_hz)
    if (!(f > 0.0)) throw Error("InvalidSpec", "fundamental must be > 0");
  if (num_harmonics < 1) throw Error("InvalidSpec", "num_harmonics must be >= 1");
  if (!(harmonic_decay > 0.0) || harmonic_decay > 1.0)
    throw Error("InvalidSpec", "harmonic_decay must be in (0, 1]");
  if (noise_level < 0.0 || noise_level >= 1.0)
    throw Error("InvalidSpec", "noise_level must be in [0, 1)");
  if (am_rate_hz < 0.0) throw Error("InvalidSpec", "am_rate must be >= 0");
}

AudioBuffer gen_structured_clip(const GenreSpec& spec, double duration_s,
                                int sample_rate, std::uint64_t seed) {
  spec.validate();
  if (!(duration_s > 0.0)) throw Error("InvalidSpec", "duration must be > 0");
  if (sample_rate <= 0) throw Error("InvalidSpec", "sample_rate must be > 0");

  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples = render_samples(spec, duration_to_samples(duration_s, sample_rate),
                               sample_rate, seed);
  return buf;
}

AudioBuffer gen_unstructured_clip(const std::vector<Section>& sections,
                                  int sample_rate, std::uint64_t seed) {
  if (sections.size() < 2)
    throw Error("InvalidSpec", "unstructured clip needs >= 2 sections");
  if (sample_rate <= 0) throw Error("InvalidSpec", "sample_rate must be > 0");
  for (const auto& s : sections) {
    s.spec.validate();
    if (!(s.duration_s > 0.0))
      throw Error("InvalidSpec", "section duration must be > 0");
  }

  const std::size_t fade = duration_to_samples(kCrossfadeSeconds, sample_rate);
  std::vector<std::size_t> lens(sections.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    lens[i] = duration_to_samples(sections[i].duration_s, sample_rate);
    total += lens[i];
  }

  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.resize(total);

  // Each section except the last is rendered with `fade` extra samples that
  // are blended into the head of the next section, so lengths are preserved.
  std::vector<double> prev_tail;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const bool last = i + 1 == sections.size();
    const std::size_t extra = last ? 0 : fade;
    std::vector<double> sec = render_samples(
        sections[i].spec, lens[i] + extra, sample_rate, derive_seed(seed, i));

    std::size_t t = 0;
    if (i > 0) {
      const std::size_t w = std::min(prev_tail.size(), lens[i]);
      for (; t < w; ++t) {
        const double a = static_cast<double>(t + 1) / static_cast<double>(w + 1);
        buf.samples[pos + t] = (1.0 - a) * prev_tail[t] + a * sec[t];
      }
    }
    for (; t < lens[i]; ++t) buf.samples[pos + t] = sec[t];
    pos += lens[i];

    prev_tail.assign(sec.begin() + static_cast<std::ptrdiff_t>(lens[i]), sec.end());
  }
  return buf;
}

CorpusConfig load_corpus_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("IoError", "cannot open config " + path.string());

  CorpusConfig cfg;
  bool have_genres = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("ParseError", "config line " + std::to_string(lineno) +
                                    " is not key=value");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      if (key == "genres") {
        std::istringstream ss(value);
        std::string g;
        while (std::getline(ss, g, ',')) {
          g = strip(g);
          if (!g.empty()) cfg.genres.push_back(g);
        }
        have_genres = true;
      } else if (key == "clips_per_genre") {
        cfg.clips_per_genre = std::stoi(value);
      } else if (key == "duration_s") {
        cfg.duration_s = std::stod(value);
      } else if (key == "structured") {
        cfg.structured = value == "1" || value == "true";
      } else if (key == "master_seed") {
        cfg.master_seed = std::stoull(value);
      } else if (key == "sample_rate") {
        cfg.sample_rate = std::stoi(value);
      } else {
        throw Error("ParseError", "unknown config key '" + key + "'");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error("ParseError", "bad value for config key '" + key + "'");
    }
  }
  if (!have_genres || cfg.genres.empty())
    throw Error("ParseError", "config must list genres");
  return cfg;
}

GenreSpec structured_palette_spec(const std::string& name, std::size_t genre_index,
                                  int sample_rate) {
  const std::size_t g = genre_index;
  // Fundamentals sit on the frame-synchronous grid sample_rate/512 (512 is
  // the default hop), so under the default framing every analysis frame of a
  // palette clip sees the same waveform and per-frame features are constant.
  // Off-grid content (noise, AM, detuned tones) would precess against the
  // frame grid and make short-window feature means drift.
  const double grid = sample_rate / 512.0;
  const long long k1 = 3LL * (1LL << (g % 4)) + static_cast<long long>(g % 3);
  const long long k2 = (3 * k1 + 1) / 2;  // near a fifth above, still on grid

  GenreSpec spec;
  spec.name = name;
  spec.fundamentals_hz = {static_cast<double>(k1) * grid,
                          static_cast<double>(k2) * grid};
  spec.num_harmonics = 5;
  spec.harmonic_decay = 0.40 + 0.12 * static_cast<double>(g % 4);
  spec.noise_level = 0.0;
  spec.am_rate_hz = 0.0;
  return spec;
}

GenreSpec shared_intro_spec() {
  GenreSpec spec;
  spec.name = "intro";
  spec.fundamentals_hz = {130.81};  // C3
  spec.num_harmonics = 4;
  spec.harmonic_decay = 0.50;
  spec.noise_level = 0.10;
  return spec;
}

GenreSpec decoy_spec(std::size_t which) {
  GenreSpec spec;
  switch (which % 3) {
    case 0:
      spec.name = "decoy0";
      spec.fundamentals_hz = {196.00};  // G3
      spec.num_harmonics = 3;
      spec.harmonic_decay = 0.70;
      spec.noise_level = 0.12;
      break;
    case 1:
      spec.name = "decoy1";
      spec.fundamentals_hz = {329.63, 415.30};  // E4 + G#4
      spec.num_harmonics = 4;
      spec.harmonic_decay = 0.55;
      spec.noise_level = 0.20;
      spec.am_rate_hz = 2.0;
      break;
    default:
      spec.name = "decoy2";
      spec.fundamentals_hz = {587.33};  // D5
      spec.num_harmonics = 5;
      spec.harmonic_decay = 0.45;
      spec.noise_level = 0.06;
      break;
  }
  return spec;
}

GenreSpec jitter_spec(GenreSpec spec, std::uint64_t seed, double grid_hz) {
  Xorshift64Star rng(derive_seed(seed, 7));
  // Detune by whole grid steps so jittered clips stay frame-synchronous.
  for (double& f : spec.fundamentals_hz) {
    const double step = static_cast<double>(rng.below(3)) - 1.0;  // -1, 0, +1
    f = std::max(f + step * grid_hz, grid_hz);
  }
  spec.harmonic_decay =
      std::clamp(spec.harmonic_decay * (1.0 + 0.05 * rng.uniform_pm1()), 1e-3, 1.0);
  return spec;
}

std::vector<PlannedClip> corpus_plan(const CorpusConfig& config) {
  std::vector<PlannedClip> plan;
  plan.reserve(config.genres.size() * static_cast<std::size_t>(config.clips_per_genre));
  std::size_t index = 0;
  for (std::size_t g = 0; g < config.genres.size(); ++g) {
    for (int c = 0; c < config.clips_per_genre; ++c, ++index) {
      PlannedClip clip;
      char num[16];
      std::snprintf(num, sizeof(num), "%05d", c);
      clip.filename = config.genres[g] + "." + num + ".wav";
      clip.label = config.genres[g];
      clip.genre_index = g;
      clip.index_in_genre = static_cast<std::size_t>(c);
      clip.seed = derive_seed(config.master_seed, index);
      plan.push_back(std::move(clip));
    }
  }
  return plan;
}

std::vector<Section> unstructured_sections(const CorpusConfig& config,
                                           const PlannedClip& clip) {
  Xorshift64Star rng(derive_seed(clip.seed, 11));
  const std::size_t n_sections = 3 + rng.below(3);  // 3..5
  const double first_frac = 0.12 + 0.08 * rng.uniform01();
  const double last_frac = 0.35 + 0.15 * rng.uniform01();
  const std::size_t n_mid = n_sections - 2;

  std::vector<double> weights(n_mid);
  double wsum = 0.0;
  for (double& w : weights) {
    w = 0.5 + rng.uniform01();
    wsum += w;
  }

  std::vector<Section> sections;
  sections.reserve(n_sections);
  sections.push_back({shared_intro_spec(), first_frac * config.duration_s});
  const double mid_total = (1.0 - first_frac - last_frac) * config.duration_s;
  for (std::size_t j = 0; j < n_mid; ++j)
    sections.push_back({decoy_spec(rng.below(3)), mid_total * weights[j] / wsum});
  GenreSpec genre = jitter_spec(
      structured_palette_spec(clip.label, clip.genre_index), clip.seed);
  sections.push_back({genre, last_frac * config.duration_s});
  return sections;
}

AudioBuffer render_clip(const CorpusConfig& config, const PlannedClip& clip) {
  if (config.structured) {
    const GenreSpec spec = jitter_spec(
        structured_palette_spec(clip.label, clip.genre_index), clip.seed);
    return gen_structured_clip(spec, config.duration_s, config.sample_rate,
                               clip.seed);
  }
  return gen_unstructured_clip(unstructured_sections(config, clip),
                               config.sample_rate, clip.seed);
}

CorpusManifest gen_corpus(const CorpusConfig& config,
                          const std::filesystem::path& out_dir) {
  if (config.genres.size() < 2)
    throw Error("InvalidSpec", "corpus needs at least 2 genres");
  if (config.clips_per_genre < 2)
    throw Error("InvalidSpec", "corpus needs at least 2 clips per genre");
  if (!(config.duration_s > 0.0))
    throw Error("InvalidSpec", "corpus duration must be > 0");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("IoError", "cannot create " + out_dir.string());

  const auto plan = corpus_plan(config);

  std::ostringstream sections_csv;
  sections_csv << "filename,section_index,spec_name,start_s,duration_s\n";

  CorpusManifest manifest;
  for (const auto& clip : plan) {
    write_wav(out_dir / clip.filename, render_clip(config, clip));
    manifest.entries.push_back({clip.filename, clip.label, config.duration_s,
                                config.structured, clip.seed});
    if (!config.structured) {
      double start = 0.0;
      char buf[64];
      std::size_t idx = 0;
      for (const auto& s : unstructured_sections(config, clip)) {
        sections_csv << clip.filename << ',' << idx++ << ',' << s.spec.name << ',';
        std::snprintf(buf, sizeof(buf), "%.9g", start);
        sections_csv << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.9g", s.duration_s);
        sections_csv << buf << '\n';
        start += s.duration_s;
      }
    }
  }

  write_manifest(out_dir / "manifest.csv", manifest);
  if (!config.structured) {
    std::ofstream out(out_dir / "sections.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write sections.csv");
    out << sections_csv.str();
  }
  return manifest;
}

}  // namespace specex
