#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "elicit/dataset.hpp"
#include "elicit/evaluation.hpp"
#include "elicit/forest.hpp"
#include "elicit/sampler.hpp"

namespace elicit {

// PaperReplication balances the whole dataset and then splits it, so
// synthetic rows can land in the test subset. Sound splits first and
// balances the training subset only.
enum class PipelineMode { PaperReplication, Sound };

const char* to_string(PipelineMode m);
PipelineMode parse_mode(const std::string& text);

struct ArmSpec {
  PipelineMode mode = PipelineMode::Sound;
  bool balance = false;
  double test_fraction = 0.2;
  bool stratified_split = false;
  std::uint64_t split_seed = 0;
  SmoteConfig smote;
  ForestParams forest;
};

// One train/test experiment: optional balancing, split, forest, test scores.
struct ArmOutcome {
  Dataset train;
  Dataset test;
  RandomForestModel model;
  std::vector<double> test_scores;
  RocAnalysis roc;
};

ArmOutcome run_arm(const Dataset& d, const ArmSpec& spec);

}  // namespace elicit
