#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "elicit/dataset.hpp"

namespace elicit {

struct SmoteConfig {
  std::size_t k_neighbors = 5;
  // Minority count after balancing, as a fraction of the majority count.
  double target_ratio = 1.0;
  std::uint64_t seed = 0;
};

// One synthetic minority row: values = parent + k_draw * (neighbor - parent).
struct SyntheticSample {
  std::vector<double> values;
  std::vector<Code> rounded;
  std::size_t parent_index = 0;
  std::size_t neighbor_index = 0;
  double k_draw = 0.0;
};

// Up to k nearest minority rows of row i (excluding i itself), by Euclidean
// distance over ordinal codes. Ties go to the lower row index.
std::vector<std::size_t> minority_neighbors(const Dataset& d, std::size_t i, std::size_t k);

// Interpolates between two code vectors. Rounded codes take the nearest
// integer (exact halves round down) clamped to the feature's level range.
// parent_index/neighbor_index are left for the caller to fill.
SyntheticSample synthesize(std::span<const Code> x, std::span<const Code> x_r, double k_draw,
                           const std::vector<FeatureSchema>& schema);

struct SmoteResult {
  Dataset balanced;
  std::vector<SyntheticSample> samples;
};

// Appends synthetic minority rows until the minority count reaches
// round(target_ratio * majority). Original rows are kept, in order, as a
// prefix of the output; synthetic rows are flagged in the provenance column.
SmoteResult smote_oversample_detailed(const Dataset& d, const SmoteConfig& cfg);
Dataset smote_oversample(const Dataset& d, const SmoteConfig& cfg);

}  // namespace elicit
