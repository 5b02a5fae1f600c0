#include "specex/feature_csv.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "specex/errors.hpp"

namespace specex {

std::string features_csv_header() {
  std::string h = "filename";
  for (const auto& name : FeatureVector::names()) h += "," + name;
  h += ",label";
  return h;
}

void write_features_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  out << features_csv_header() << '\n';
  char buf[48];
  for (const auto& row : rows) {
    out << row.filename;
    for (double v : row.features.values()) {
      std::snprintf(buf, sizeof(buf), "%.9g", v);
      out << ',' << buf;
    }
    out << ',' << row.label << '\n';
  }
}

std::vector<FeatureRow> read_features_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("ParseError", "empty features CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != features_csv_header())
    throw Error("ParseError", "bad features CSV header: '" + line + "'");

  std::vector<FeatureRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != FeatureVector::kSize + 2)
      throw Error("ParseError", "features CSV line " + std::to_string(lineno) +
                                    " has " + std::to_string(fields.size()) +
                                    " fields, want " +
                                    std::to_string(FeatureVector::kSize + 2));

    FeatureRow row;
    row.filename = fields.front();
    row.label = fields.back();
    std::array<double, FeatureVector::kSize> values{};
    for (std::size_t i = 0; i < FeatureVector::kSize; ++i) {
      try {
        values[i] = std::stod(fields[i + 1]);
      } catch (const std::exception&) {
        throw Error("ParseError", "bad number on features CSV line " +
                                      std::to_string(lineno));
      }
    }
    row.features = FeatureVector::from_values(values);
    rows.push_back(std::move(row));
  }
  return rows;
}

FeatureTable to_feature_table(std::span<const FeatureRow> rows) {
  FeatureTable table;
  for (const auto& row : rows) table.label_names.push_back(row.label);
  std::sort(table.label_names.begin(), table.label_names.end());
  table.label_names.erase(
      std::unique(table.label_names.begin(), table.label_names.end()),
      table.label_names.end());

  for (const auto& row : rows) {
    const auto it = std::lower_bound(table.label_names.begin(),
                                     table.label_names.end(), row.label);
    table.rows.push_back(row.features);
    table.labels.push_back(static_cast<int>(it - table.label_names.begin()));
  }
  return table;
}

}  // namespace specex
