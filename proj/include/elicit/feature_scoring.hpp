#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "elicit/dataset.hpp"
#include "elicit/experiment.hpp"

namespace elicit {

enum class FilterMethod { Chi2, AnovaF, MutualInfo };

// Names used in configs and file names: chi2, anova_f, mutual_info.
const char* to_string(FilterMethod m);
FilterMethod parse_filter_method(const std::string& text);

// Pearson chi-squared statistic of the (observed levels x 2) contingency table.
double chi2_score(std::span<const Code> feature, std::span<const Label> y);

// One-way ANOVA F over the feature's codes grouped by class (df 1, n-2).
// +infinity when within-group variance vanishes but the means differ.
double anova_f_score(std::span<const Code> feature, std::span<const Label> y);

// Plug-in mutual information between feature and class, in nats.
double mutual_info_score(std::span<const Code> feature, std::span<const Label> y);

double filter_score(FilterMethod method, std::span<const Code> feature, std::span<const Label> y);

struct FeatureScore {
  std::string feature;
  FeatureRole role = FeatureRole::Context;
  double score = 0.0;
};

struct FeatureScoreTable {
  FilterMethod method = FilterMethod::MutualInfo;
  // Descending score; ties by ascending feature name.
  std::vector<FeatureScore> entries;
};

FeatureScoreTable score_all(const Dataset& d, FilterMethod method);

void sort_scores(std::vector<FeatureScore>& entries);

// `feature,role,score` with a header row.
std::string to_csv(const FeatureScoreTable& table);
FeatureScoreTable parse_score_csv(const std::string& text, FilterMethod method);

struct FilterSelectionConfig {
  std::vector<FilterMethod> methods{FilterMethod::MutualInfo, FilterMethod::Chi2,
                                    FilterMethod::AnovaF};
  std::size_t top_k = 10;
  PipelineMode mode = PipelineMode::Sound;
  double test_fraction = 0.2;
  bool stratified_split = false;
  bool smote_enabled = true;
  SmoteConfig smote;
  ForestParams forest;
  // Shared by every method so the comparison sees the same splits and draws.
  std::uint64_t seed = 0;
};

struct FilterSelection {
  FilterMethod best = FilterMethod::MutualInfo;
  FeatureScoreTable best_table;
  std::map<FilterMethod, double> auch;
  std::map<FilterMethod, FeatureScoreTable> tables;
};

// Restricts the data to each method's top_k features, runs
// balance/split/train/score and picks the method whose ROC convex hull has
// the largest area. Equal areas resolve MutualInfo, then Chi2, then AnovaF.
FilterSelection select_best_filter(const Dataset& d, const FilterSelectionConfig& cfg);

}  // namespace elicit
