#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "specex/features.hpp"
#include "specex/mlp.hpp"

namespace specex {

struct FeatureRow {
  std::string filename;
  FeatureVector features;
  std::string label;
};

// Frozen column order - this is the interface between extract and train:
// filename,chroma_stft,rmse,spectral_centroid,spectral_bandwidth,rolloff,
// zero_crossing_rate,mfcc1,...,mfcc20,label
std::string features_csv_header();

// Values carry 9 significant digits; '\n' line endings.
void write_features_csv(std::ostream& out, std::span<const FeatureRow> rows);

std::vector<FeatureRow> read_features_csv(std::istream& in);  // throws ParseError

// Label names are the sorted unique labels; indices follow that order.
FeatureTable to_feature_table(std::span<const FeatureRow> rows);

}  // namespace specex
