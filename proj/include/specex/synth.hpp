#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "specex/audio.hpp"
#include "specex/manifest.hpp"

namespace specex {

// Recipe for a stationary clip: a harmonic stack plus white noise, optionally
// amplitude-modulated. Harmonics at or above Nyquist are dropped, never
// aliased. The generator rescales the tonal part to (1 - noise_level) so
// samples always stay inside [-1, 1].
struct GenreSpec {
  std::string name;
  std::vector<double> fundamentals_hz;
  int num_harmonics = 1;        // >= 1
  double harmonic_decay = 1.0;  // (0, 1], amplitude ratio per overtone
  double noise_level = 0.0;     // [0, 1)
  double am_rate_hz = 0.0;      // >= 0; depth fixed at 0.25

  void validate() const;  // throws InvalidSpec
};

struct Section {
  GenreSpec spec;
  double duration_s = 0.0;
};

inline constexpr double kCrossfadeSeconds = 0.050;

// Stationary clip, fully determined by (spec, duration, sample_rate, seed).
AudioBuffer gen_structured_clip(const GenreSpec& spec, double duration_s,
                                int sample_rate, std::uint64_t seed);

// Concatenation of stationary sections with a 50 ms linear crossfade at each
// boundary; total length is the sum of the section lengths in samples.
AudioBuffer gen_unstructured_clip(const std::vector<Section>& sections,
                                  int sample_rate, std::uint64_t seed);

// Key-value corpus description (keys: genres, clips_per_genre, duration_s,
// structured, master_seed, sample_rate).
struct CorpusConfig {
  std::vector<std::string> genres;
  int clips_per_genre = 2;
  double duration_s = 30.0;
  bool structured = true;
  std::uint64_t master_seed = 1;
  int sample_rate = 22050;
};

CorpusConfig load_corpus_config(const std::filesystem::path& path);

// Built-in genre palette. Genres are separated by register (octave steps with
// a per-genre semitone rotation), pitch class and harmonic decay; noise and
// AM are kept at zero so structured clips are stationary in every feature.
GenreSpec structured_palette_spec(const std::string& name, std::size_t genre_index);

// First section of every unstructured clip; identical across genres so short
// head segments carry no label information.
GenreSpec shared_intro_spec();

// Genre-independent middle-section specs, index 0..2.
GenreSpec decoy_spec(std::size_t which);

// Per-clip variation: detunes fundamentals by up to +-1% and the decay by
// up to +-5%, seeded, so clips within a genre are not near-duplicates.
GenreSpec jitter_spec(GenreSpec spec, std::uint64_t seed);

struct PlannedClip {
  std::string filename;
  std::string label;
  std::size_t genre_index = 0;
  std::size_t index_in_genre = 0;
  std::uint64_t seed = 0;
};

// Deterministic corpus layout for a config; entry order is manifest order.
std::vector<PlannedClip> corpus_plan(const CorpusConfig& config);

// Section plan for one unstructured clip: a shared intro (12-20% of the
// clip), 1-3 random decoy sections, and the genre-bearing section last
// (35-50% of the clip), so the clip tail is always label-informative.
std::vector<Section> unstructured_sections(const CorpusConfig& config,
                                           const PlannedClip& clip);

AudioBuffer render_clip(const CorpusConfig& config, const PlannedClip& clip);

// Renders every planned clip to <out_dir>/<label>.NNNNN.wav, writes
// manifest.csv (and sections.csv for unstructured corpora), and returns the
// manifest. Fully determined by (config, master_seed).
CorpusManifest gen_corpus(const CorpusConfig& config,
                          const std::filesystem::path& out_dir);

}  // namespace specex
