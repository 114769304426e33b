#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace elicit {

using Code = std::int32_t;
using Label = std::uint8_t;

enum class FeatureRole { Context, Technique };

const char* to_string(FeatureRole role);
FeatureRole parse_role(const std::string& text);

struct FeatureSchema {
  std::string name;
  FeatureRole role = FeatureRole::Context;
  // Category strings; a category's ordinal code is its index here.
  std::vector<std::string> levels;

  bool operator==(const FeatureSchema&) const = default;
};

// Categorical table with a binary target.
//
// Rows are stored row-major as ordinal codes. Every row carries a provenance
// flag so synthetic (oversampled) rows can be told apart from observed ones
// anywhere downstream. Instances are immutable once constructed; the
// constructor enforces all structural invariants and throws ValidationError.
class Dataset {
 public:
  Dataset(std::vector<FeatureSchema> schema, std::string target_name,
          std::vector<std::string> target_labels, std::vector<Code> codes,
          std::vector<Label> labels, std::vector<std::uint8_t> synthetic = {},
          std::size_t target_position = SIZE_MAX);

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return schema_.size(); }

  const std::vector<FeatureSchema>& schema() const { return schema_; }
  const FeatureSchema& feature(std::size_t j) const { return schema_[j]; }
  const std::string& target_name() const { return target_name_; }
  // {negative label, positive label} as they appeared in the source.
  const std::vector<std::string>& target_labels() const { return target_labels_; }
  // Number of feature columns written before the target in CSV output.
  std::size_t target_position() const { return target_position_; }

  std::span<const Code> row(std::size_t i) const {
    return {codes_.data() + i * cols(), cols()};
  }
  Code code(std::size_t i, std::size_t j) const { return codes_[i * cols() + j]; }
  Label label(std::size_t i) const { return labels_[i]; }
  bool is_synthetic(std::size_t i) const { return synthetic_[i] != 0; }

  std::span<const Code> codes() const { return codes_; }
  std::span<const Label> labels() const { return labels_; }
  std::span<const std::uint8_t> provenance() const { return synthetic_; }

  std::vector<Code> column(std::size_t j) const;
  std::size_t count_label(Label c) const;
  std::size_t count_synthetic() const;

  // Row subset, in the given order (duplicates allowed).
  Dataset select_rows(std::span<const std::size_t> indices) const;
  // Column subset; columns keep the order given.
  Dataset select_columns(std::span<const std::size_t> indices) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<FeatureSchema> schema_;
  std::string target_name_;
  std::vector<std::string> target_labels_;
  std::vector<Code> codes_;
  std::vector<Label> labels_;
  std::vector<std::uint8_t> synthetic_;
  std::size_t target_position_;
};

struct DatasetSummary {
  std::size_t n_majority = 0;
  std::size_t n_minority = 0;
  Label majority_label = 1;
  double imbalance_ratio = 1.0;
  static constexpr const char* task = "binary classification";
};

struct CsvOptions {
  std::string target_name;
  std::string positive_label = "1";
  std::map<std::string, FeatureRole> roles;
  FeatureRole default_role = FeatureRole::Context;
};

Dataset parse_csv(const std::string& text, const CsvOptions& options);
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

// Emits header + decoded rows with the target at its source position.
// With `provenance_column` a trailing `_synthetic` column of 0/1 is added.
std::string to_csv(const Dataset& d, bool provenance_column = false);

Dataset drop_constant_features(const Dataset& d);

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, double test_fraction,
                                             std::uint64_t seed, bool stratified = false);

DatasetSummary summarize(const Dataset& d);

struct SyntheticSpec {
  std::size_t n_majority = 282;
  std::size_t n_minority = 41;
  std::size_t p = 27;
  std::size_t n_informative = 6;
  std::size_t levels_per_feature = 4;
  std::uint64_t seed = 7;
  // Strength of the class-conditional level shift on informative features.
  double skew = 1.2;
  // Label carried by the majority class; 1 matches a widely used technique.
  Label majority_label = 1;
};

// Informative features occupy the first n_informative columns. Feature j is
// named `context_j` for the first half of the columns and `technique_j` for
// the rest, with roles to match.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace elicit
