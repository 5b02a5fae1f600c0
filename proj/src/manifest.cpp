#include "specex/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "specex/errors.hpp"

namespace specex {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_manifest(const std::filesystem::path& path, const CorpusManifest& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("IoError", "cannot open " + path.string() + " for writing");
  out << "filename,label,duration_s,structured,seed\n";
  char buf[64];
  for (const auto& e : m.entries) {
    std::snprintf(buf, sizeof(buf), "%.9g", e.duration_s);
    out << e.filename << ',' << e.label << ',' << buf << ','
        << (e.structured ? 1 : 0) << ',' << e.seed << '\n';
  }
  if (!out) throw Error("IoError", "write failed for " + path.string());
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw Error("ParseError", "empty manifest: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "filename,label,duration_s,structured,seed")
    throw Error("ParseError", "bad manifest header: '" + line + "'");

  CorpusManifest m;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw Error("ParseError", "manifest line " + std::to_string(lineno) +
                                    " has " + std::to_string(fields.size()) +
                                    " fields, want 5");
    ManifestEntry e;
    e.filename = fields[0];
    e.label = fields[1];
    try {
      e.duration_s = std::stod(fields[2]);
      e.structured = std::stoi(fields[3]) != 0;
      e.seed = std::stoull(fields[4]);
    } catch (const std::exception&) {
      throw Error("ParseError",
                  "bad numeric field on manifest line " + std::to_string(lineno));
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

}  // namespace specex
