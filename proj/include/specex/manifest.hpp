#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace specex {

struct ManifestEntry {
  std::string filename;  // relative to the manifest's directory
  std::string label;
  double duration_s = 0.0;
  bool structured = true;
  std::uint64_t seed = 0;
};

// Corpus index written by the synthesizer and consumed by extract/bench.
// CSV columns: filename,label,duration_s,structured,seed
struct CorpusManifest {
  std::vector<ManifestEntry> entries;
};

void write_manifest(const std::filesystem::path& path, const CorpusManifest& m);
CorpusManifest read_manifest(const std::filesystem::path& path);

}  // namespace specex
