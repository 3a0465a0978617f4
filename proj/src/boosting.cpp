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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "latent_debate/detector.hpp"
#include "latent_debate/errors.hpp"
#include "latent_debate/rng.hpp"

namespace latent_debate {

void DetectorConfig::validate() const {
  if (num_trees < 0) throw ConfigError("num_trees must be >= 0");
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ConfigError("learning_rate must lie in (0, 1]");
  }
  if (!(subsample > 0.0 && subsample <= 1.0)) throw ConfigError("subsample must lie in (0, 1]");
  if (!(colsample_per_tree > 0.0 && colsample_per_tree <= 1.0)) {
    throw ConfigError("colsample_per_tree must lie in (0, 1]");
  }
  if (!(l2_reg >= 0.0)) throw ConfigError("l2_reg must be >= 0");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
}

nlohmann::ordered_json to_json(const DetectorConfig& config) {
  return {{"num_trees", config.num_trees},
          {"max_depth", config.max_depth},
          {"learning_rate", config.learning_rate},
          {"subsample", config.subsample},
          {"colsample_per_tree", config.colsample_per_tree},
          {"seed", config.seed},
          {"l2_reg", config.l2_reg},
          {"train_fraction", config.train_fraction}};
}

DetectorConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("detector config must be a JSON object");
  DetectorConfig config;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "num_trees") config.num_trees = value.get<int>();
      else if (key == "max_depth") config.max_depth = value.get<int>();
      else if (key == "learning_rate") config.learning_rate = value.get<double>();
      else if (key == "subsample") config.subsample = value.get<double>();
      else if (key == "colsample_per_tree") config.colsample_per_tree = value.get<double>();
      else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "l2_reg") config.l2_reg = value.get<double>();
      else if (key == "train_fraction") config.train_fraction = value.get<double>();
      else throw ConfigError(fmt::format("unknown detector config key '{}'", key));
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ConfigError(fmt::format("detector config: {}", e.what()));
  }
  config.validate();
  return config;
}

Dataset to_dataset(std::span<const FeatureVector> vectors) {
  Dataset data;
  data.rows.reserve(vectors.size());
  data.labels.reserve(vectors.size());
  for (const auto& v : vectors) {
    data.rows.emplace_back(v.values.begin(), v.values.end());
    data.labels.push_back(v.hallucination_label);
  }
  return data;
}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw SchemaError("tree without nodes");
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    const int n = static_cast<int>(nodes_.size());
    if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n) {
      throw SchemaError("tree child index out of range");
    }
  }
}

double RegressionTree::predict(std::span<const double> x) const {
  const TreeNode* node = &nodes_[0];
  while (!node->is_leaf()) {
    node = &nodes_[x[node->feature] < node->threshold ? node->left : node->right];
  }
  return node->value;
}

std::vector<int> RegressionTree::used_features() const {
  std::vector<int> out;
  for (const auto& node : nodes_) {
    if (!node.is_leaf()) out.push_back(node.feature);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int RegressionTree::depth() const {
  auto walk = [this](auto&& self, int index) -> int {
    const TreeNode& node = nodes_[index];
    if (node.is_leaf()) return 0;
    return 1 + std::max(self(self, node.left), self(self, node.right));
  };
  return walk(walk, 0);
}

namespace {

nlohmann::ordered_json tree_node_json(const std::vector<TreeNode>& nodes, int index) {
  const TreeNode& node = nodes[index];
  if (node.is_leaf()) return {{"value", node.value}};
  return {{"feature", node.feature},
          {"threshold", node.threshold},
          {"left", tree_node_json(nodes, node.left)},
          {"right", tree_node_json(nodes, node.right)}};
}

int tree_node_from_json(const nlohmann::json& doc, std::vector<TreeNode>& nodes,
                        std::size_t num_features) {
  if (!doc.is_object()) throw SchemaError("tree node must be an object");
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (doc.contains("value")) {
    if (!doc["value"].is_number()) throw SchemaError("leaf value must be a number");
    nodes[index].value = doc["value"].get<double>();
    return index;
  }
  for (const char* key : {"feature", "threshold", "left", "right"}) {
    if (!doc.contains(key)) throw SchemaError(fmt::format("split node missing '{}'", key));
  }
  if (!doc["feature"].is_number_integer() || !doc["threshold"].is_number()) {
    throw SchemaError("split node has a non-numeric feature or threshold");
  }
  const int feature = doc["feature"].get<int>();
  if (feature < 0 || static_cast<std::size_t>(feature) >= num_features) {
    throw SchemaError(fmt::format("split feature {} out of range", feature));
  }
  nodes[index].feature = feature;
  nodes[index].threshold = doc["threshold"].get<double>();
  const int left = tree_node_from_json(doc["left"], nodes, num_features);
  const int right = tree_node_from_json(doc["right"], nodes, num_features);
  nodes[index].left = left;
  nodes[index].right = right;
  return index;
}

}  // namespace

nlohmann::ordered_json to_json(const DetectorModel& model) {
  nlohmann::ordered_json doc;
  doc["config"] = to_json(model.config);
  doc["num_features"] = model.num_features;
  doc["base_score"] = model.base_score;
  doc["trees"] = nlohmann::ordered_json::array();
  for (const auto& tree : model.trees) doc["trees"].push_back(tree_node_json(tree.nodes(), 0));
  return doc;
}

DetectorModel model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("model must be a JSON object");
  for (const char* key : {"config", "num_features", "base_score", "trees"}) {
    if (!doc.contains(key)) throw SchemaError(fmt::format("model missing '{}'", key));
  }
  DetectorModel model;
  try {
    model.config = config_from_json(doc["config"]);
  } catch (const ConfigError& e) {
    throw SchemaError(e.what());
  }
  if (!doc["num_features"].is_number_unsigned() || !doc["base_score"].is_number() ||
      !doc["trees"].is_array()) {
    throw SchemaError("model fields have the wrong type");
  }
  model.num_features = doc["num_features"].get<std::size_t>();
  model.base_score = doc["base_score"].get<double>();
  for (const auto& tree : doc["trees"]) {
    std::vector<TreeNode> nodes;
    tree_node_from_json(tree, nodes, model.num_features);
    model.trees.emplace_back(std::move(nodes));
  }
  return model;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, const DetectorConfig& config) {
  if (n < 4) throw TooFewSamples(fmt::format("{} samples, need at least 4", n));
  config.validate();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(config.seed);
  rng.shuffle(order);
  const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * config.train_fraction));
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return {std::move(train), std::move(test)};
}

std::pair<std::vector<FeatureVector>, std::vector<FeatureVector>> split_dataset(
    std::span<const FeatureVector> vectors, const DetectorConfig& config) {
  auto [train_idx, test_idx] = split_indices(vectors.size(), config);
  std::vector<FeatureVector> train_set;
  std::vector<FeatureVector> test_set;
  for (auto i : train_idx) train_set.push_back(vectors[i]);
  for (auto i : test_idx) test_set.push_back(vectors[i]);
  return {std::move(train_set), std::move(test_set)};
}

namespace {

double sigmoid(double margin) { return 1.0 / (1.0 + std::exp(-margin)); }

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::span<const double> grad, std::span<const double> hess,
              std::span<const int> features, const DetectorConfig& config)
      : data_(data), grad_(grad), hess_(hess), features_(features), config_(config) {}

  RegressionTree build(std::vector<std::size_t> rows) {
    nodes_.clear();
    nodes_.emplace_back();
    grow(0, std::move(rows), 0);
    return RegressionTree(std::move(nodes_));
  }

 private:
  double score(double g, double h) const { return g * g / (h + config_.l2_reg); }

  void grow(int index, std::vector<std::size_t> rows, int depth) {
    double g = 0.0;
    double h = 0.0;
    for (auto r : rows) {
      g += grad_[r];
      h += hess_[r];
    }
    const double leaf = -g / (h + config_.l2_reg) * config_.learning_rate;

    if (depth >= config_.max_depth) {
      nodes_[index].value = leaf;
      return;
    }
    const SplitCandidate best = find_split(rows, g, h);
    if (best.feature < 0) {
      // A root that cannot split yields a zero stump.
      nodes_[index].value = depth == 0 ? 0.0 : leaf;
      return;
    }

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (auto r : rows) {
      (data_.rows[r][best.feature] < best.threshold ? left_rows : right_rows).push_back(r);
    }
    const int left = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const int right = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[index].feature = best.feature;
    nodes_[index].threshold = best.threshold;
    nodes_[index].left = left;
    nodes_[index].right = right;
    grow(left, std::move(left_rows), depth + 1);
    grow(right, std::move(right_rows), depth + 1);
  }

  SplitCandidate find_split(const std::vector<std::size_t>& rows, double g, double h) const {
    SplitCandidate best;
    const double parent = score(g, h);
    std::vector<std::size_t> sorted = rows;
    for (int f : features_) {
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        const double xa = data_.rows[a][f];
        const double xb = data_.rows[b][f];
        return xa < xb || (xa == xb && a < b);
      });
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        gl += grad_[sorted[k]];
        hl += hess_[sorted[k]];
        const double lo = data_.rows[sorted[k]][f];
        const double hi = data_.rows[sorted[k + 1]][f];
        if (!(lo < hi)) continue;
        const double gain = 0.5 * (score(gl, hl) + score(g - gl, h - hl) - parent);
        if (gain > best.gain) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold > lo)) threshold = hi;
          best = {gain, f, threshold};
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  std::span<const int> features_;
  const DetectorConfig& config_;
  std::vector<TreeNode> nodes_;
};

std::vector<std::size_t> draw_without_replacement(SplitMix64& rng, std::size_t n, double fraction) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  if (fraction >= 1.0) return pool;
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

void check_dimensions(const DetectorModel& model, std::span<const double> x) {
  if (x.size() != model.num_features) {
    throw DimensionError(fmt::format("expected {} features, got {}", model.num_features, x.size()));
  }
}

}  // namespace

DetectorModel train(const Dataset& data, const DetectorConfig& config) {
  config.validate();
  if (data.labels.size() != data.rows.size()) {
    throw LengthMismatch("dataset rows and labels differ in length");
  }
  const std::size_t n = data.size();
  const std::size_t num_features = data.num_features();
  if (n == 0) throw EmptyInput("empty training set");
  for (const auto& row : data.rows) {
    if (row.size() != num_features) throw DimensionError("ragged training rows");
  }
  const auto positives = static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), 1));
  if (positives == 0 || positives == n) throw SingleClassError("training set has a single class");
  for (int y : data.labels) {
    if (y != 0 && y != 1) throw SchemaError("labels must be 0 or 1");
  }

  DetectorModel model;
  model.num_features = num_features;
  model.config = config;
  const double prevalence = static_cast<double>(positives) / static_cast<double>(n);
  model.base_score = std::log(prevalence / (1.0 - prevalence));

  std::vector<double> margin(n, model.base_score);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  SplitMix64 rng(config.seed);

  for (int round = 0; round < config.num_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - data.labels[i];
      hess[i] = p * (1.0 - p);
    }
    const auto rows = draw_without_replacement(rng, n, config.subsample);
    const auto columns = draw_without_replacement(rng, num_features, config.colsample_per_tree);
    std::vector<int> features(columns.begin(), columns.end());

    TreeBuilder builder(data, grad, hess, features, config);
    RegressionTree tree = builder.build(rows);
    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.predict(data.rows[i]);
    model.trees.push_back(std::move(tree));
  }
  return model;
}

DetectorModel train(std::span<const FeatureVector> vectors, const DetectorConfig& config) {
  return train(to_dataset(vectors), config);
}

double predict_margin(const DetectorModel& model, std::span<const double> x) {
  check_dimensions(model, x);
  double margin = model.base_score;
  for (const auto& tree : model.trees) margin += tree.predict(x);
  return margin;
}

double predict_proba(const DetectorModel& model, std::span<const double> x) {
  constexpr double kLow = std::numeric_limits<double>::min();
  const double kHigh = std::nextafter(1.0, 0.0);
  return std::clamp(sigmoid(predict_margin(model, x)), kLow, kHigh);
}

double predict_proba(const DetectorModel& model, const FeatureVector& x) {
  return predict_proba(model, std::span<const double>(x.values));
}

double logloss(const DetectorModel& model, const Dataset& data,
               std::optional<std::size_t> num_trees) {
  if (data.size() == 0) throw EmptyInput("empty dataset");
  const std::size_t use = std::min(num_trees.value_or(model.trees.size()), model.trees.size());
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    check_dimensions(model, data.rows[i]);
    double margin = model.base_score;
    for (std::size_t t = 0; t < use; ++t) margin += model.trees[t].predict(data.rows[i]);
    // log(1 + exp(-m)) for y = 1, log(1 + exp(m)) for y = 0
    const double signed_margin = data.labels[i] == 1 ? margin : -margin;
    total += std::log1p(std::exp(-std::abs(signed_margin))) + std::max(0.0, -signed_margin);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace latent_debate
