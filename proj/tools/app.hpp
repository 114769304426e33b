#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "elicit/dataset.hpp"
#include "elicit/evaluation.hpp"
#include "elicit/recommender.hpp"

namespace elicit::app {

enum ExitCode : int { kSuccess = 0, kRuntimeError = 1, kValidationError = 2 };

// Parsed experiment configuration file. Unknown keys are rejected.
struct AppConfig {
  std::vector<std::string> targets;
  std::string positive_label = "1";
  std::map<std::string, FeatureRole> roles;
  FeatureRole default_role = FeatureRole::Context;
  PipelineConfig pipeline;

  CsvOptions csv_options(std::size_t input_index = 0) const;
};

AppConfig parse_config(const nlohmann::json& j);
AppConfig load_config(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Both hulls as polylines in a 600x600 plot area: x = fpr*600, y = (1-tpr)*600.
std::string render_hulls_svg(const RocAnalysis& imbalanced, const RocAnalysis& balanced,
                             const std::string& title);

// Runs one CLI invocation (args exclude the program name) and returns the
// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace elicit::app
