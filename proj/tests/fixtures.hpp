#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "elicit/dataset.hpp"
#include "elicit/feature_scoring.hpp"

namespace elicit::fixture {

// Importance scores for the "Interviews" model (27 features).
inline const char* kInterviewsScores[][2] = {
    {"Project Size", "0.3"},
    {"Experience", "0.28"},
    {"WoW", "0.27"},
    {"Prototyping", "0.25"},
    {"Project Category", "0.23"},
    {"Company Type", "0.21"},
    {"Process analysis", "0.19"},
    {"Industrial Sector", "0.18"},
    {"Company Size", "0.18"},
    {"Interface analysis", "0.17"},
    {"Brainstorming", "0.16"},
    {"Observations", "0.16"},
    {"Workshops and focus groups", "0.15"},
    {"Business rules analysis", "0.15"},
    {"Reuse database and guidelines", "0.14"},
    {"Document analysis", "0.14"},
    {"Team Distribution", "0.13"},
    {"Stakeholders list, map or Personas", "0.13"},
    {"System/Service Class", "0.13"},
    {"BA Only Role", "0.13"},
    {"Survey or Questionnaire", "0.12"},
    {"Data mining", "0.11"},
    {"Benchmarking and Market Analysis", "0.11"},
    {"Certified", "0.09"},
    {"Design Thinking", "0.08"},
    {"Collaborative games", "0.06"},
    {"Mind Mapping", "0"},
};

inline const std::set<std::string> kContextFeatures = {
    "Project Size",        "Experience",           "WoW",          "Project Category",
    "Company Type",        "Industrial Sector",    "Company Size", "Team Distribution",
    "System/Service Class", "BA Only Role",        "Certified"};

inline FeatureRole interviews_role(const std::string& name) {
  return kContextFeatures.count(name) ? FeatureRole::Context : FeatureRole::Technique;
}

inline std::string interviews_score_csv() {
  std::string out = "feature,role,score\n";
  for (const auto& [name, score] : kInterviewsScores) {
    const std::string n = name;
    out += (n.find(',') != std::string::npos ? "\"" + n + "\"" : n) + "," +
           to_string(interviews_role(n)) + "," + score + "\n";
  }
  return out;
}

inline FeatureScoreTable interviews_scores() {
  return parse_score_csv(interviews_score_csv(), FilterMethod::MutualInfo);
}

// Class 1 exactly when `z_signal` takes its middle level; class 0 rows split
// evenly between the outer levels, so both class means of the signal are 1
// and its ANOVA F is exactly 0. The remaining columns are independent noise.
inline Dataset nonmonotone_dataset(std::uint64_t seed, std::size_t n_pos = 60,
                                   std::size_t n_neg = 140, std::size_t n_noise = 5) {
  std::mt19937_64 gen(seed);
  std::vector<FeatureSchema> schema;
  for (std::size_t j = 0; j < n_noise; ++j)
    schema.push_back({"noise_" + std::to_string(j), FeatureRole::Technique, {"a", "b", "c"}});
  schema.push_back({"z_signal", FeatureRole::Context, {"low", "mid", "high"}});
  std::vector<Code> codes;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    const bool pos = i < n_pos;
    for (std::size_t j = 0; j < n_noise; ++j) codes.push_back(static_cast<Code>(gen() % 3));
    codes.push_back(pos ? 1 : ((i - n_pos) % 2 == 0 ? 0 : 2));
    labels.push_back(pos ? 1 : 0);
  }
  return Dataset(std::move(schema), "target", {"0", "1"}, std::move(codes), std::move(labels));
}

}  // namespace elicit::fixture
