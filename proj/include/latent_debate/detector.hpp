/*
 * Copyright 2026 The Latent Debate Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Hallucination detector: second-order gradient boosted regression trees on
// the logistic loss, rank-based AUROC, and exact interventional Shapley
// attributions.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "latent_debate/features.hpp"

namespace latent_debate {

struct DetectorConfig {
  int num_trees = 100;
  int max_depth = 2;
  double learning_rate = 0.03;
  double subsample = 0.8;
  double colsample_per_tree = 0.8;
  std::uint64_t seed = 42;
  double l2_reg = 1.0;
  double train_fraction = 0.5;

  /// Throws ConfigError.
  void validate() const;
  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

nlohmann::ordered_json to_json(const DetectorConfig& config);
/// Keys missing from `doc` keep their defaults; unknown keys are rejected.
DetectorConfig config_from_json(const nlohmann::json& doc);

/// Dense row-major design matrix with 0/1 labels.
struct Dataset {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  std::size_t size() const { return rows.size(); }
  std::size_t num_features() const { return rows.empty() ? 0 : rows.front().size(); }
};

Dataset to_dataset(std::span<const FeatureVector> vectors);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // rows with x[feature] < threshold go left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output, already scaled by the learning rate

  bool is_leaf() const { return feature < 0; }
};

class RegressionTree {
 public:
  RegressionTree() : nodes_{TreeNode{}} {}
  explicit RegressionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  double predict(std::span<const double> x) const;
  /// Distinct split features, ascending.
  std::vector<int> used_features() const;
  int depth() const;

 private:
  std::vector<TreeNode> nodes_;  // nodes_[0] is the root
};

struct DetectorModel {
  std::size_t num_features = kNumFeatures;
  double base_score = 0.0;  // log-odds of the training prevalence
  std::vector<RegressionTree> trees;
  DetectorConfig config;
};

nlohmann::ordered_json to_json(const DetectorModel& model);
/// Throws SchemaError.
DetectorModel model_from_json(const nlohmann::json& doc);

/// Seeded shuffle, then the first floor(n * train_fraction) indices train.
/// Throws TooFewSamples for n < 4.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, const DetectorConfig& config);

std::pair<std::vector<FeatureVector>, std::vector<FeatureVector>> split_dataset(
    std::span<const FeatureVector> vectors, const DetectorConfig& config);

/// Throws SingleClassError, ConfigError, DimensionError.
DetectorModel train(const Dataset& data, const DetectorConfig& config);
DetectorModel train(std::span<const FeatureVector> vectors, const DetectorConfig& config);

/// base_score + sum of tree outputs. Throws DimensionError.
double predict_margin(const DetectorModel& model, std::span<const double> x);
/// Sigmoid of the margin, kept strictly inside (0, 1).
double predict_proba(const DetectorModel& model, std::span<const double> x);
double predict_proba(const DetectorModel& model, const FeatureVector& x);

/// Mean logistic loss using only the first `num_trees` trees (all when nullopt).
double logloss(const DetectorModel& model, const Dataset& data,
               std::optional<std::size_t> num_trees = std::nullopt);

/// Rank-based AUROC, tied scores share their average rank.
/// Throws LengthMismatch, SingleClassError.
double auroc(std::span<const double> scores, std::span<const int> labels);

inline constexpr std::size_t kMaxShapleyFeatures = 20;
inline constexpr std::size_t kMaxBackground = 64;

struct Attribution {
  std::vector<double> phi;
  double baseline = 0.0;  // mean margin over the background
};

/// Exact interventional Shapley values of the raw margin. v(S) is the mean
/// over the background of the margin on x restricted to S, background
/// elsewhere. Throws TooManyFeatures, EmptyBackground, DimensionError.
Attribution shapley(const DetectorModel& model, std::span<const double> x,
                    const std::vector<std::vector<double>>& background);

/// min(kMaxBackground, n) rows drawn without replacement with SplitMix64(seed).
std::vector<std::vector<double>> sample_background(const Dataset& data, std::uint64_t seed);

struct ImportanceReport {
  std::array<double, kNumFeatures> mean_abs_phi{};
  std::array<double, kNumStatistics> by_statistic{};  // summed over regions
  std::array<double, kNumRegions> by_region{};        // summed over statistics

  /// Feature indices sorted by decreasing mean |phi|, ties by index.
  std::vector<std::size_t> ranking() const;
};

/// Throws EmptyInput.
ImportanceReport importance_report(const DetectorModel& model,
                                   std::span<const FeatureVector> dataset,
                                   const std::vector<std::vector<double>>& background);

/// `feature,region,mean_abs_phi`: 15 per-cell rows, then one row per statistic
/// with region "all", then one row per region with feature "all".
std::string importance_csv(const ImportanceReport& report);

}  // namespace latent_debate
