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
#include <bit>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "latent_debate/detector.hpp"
#include "latent_debate/errors.hpp"
#include "latent_debate/rng.hpp"

namespace latent_debate {

namespace {

// Output of `tree` on the hybrid input that takes x for the features whose
// bit is set in `mask` (bit k <-> local[k]) and b everywhere else.
double hybrid_predict(const RegressionTree& tree, std::span<const int> local, unsigned mask,
                      std::span<const double> x, std::span<const double> b) {
  const auto& nodes = tree.nodes();
  const TreeNode* node = &nodes[0];
  while (!node->is_leaf()) {
    const auto pos = std::lower_bound(local.begin(), local.end(), node->feature) - local.begin();
    const double value = (mask >> pos) & 1U ? x[node->feature] : b[node->feature];
    node = &nodes[value < node->threshold ? node->left : node->right];
  }
  return node->value;
}

// |S|! (k - |S| - 1)! / k! for |S| = 0 .. k-1.
std::vector<double> shapley_weights(std::size_t k) {
  std::vector<double> w(k);
  for (std::size_t s = 0; s < k; ++s) {
    w[s] = std::tgamma(static_cast<double>(s + 1)) * std::tgamma(static_cast<double>(k - s)) /
           std::tgamma(static_cast<double>(k + 1));
  }
  return w;
}

}  // namespace

// The margin is a sum of tree outputs and the Shapley value is linear in the
// game, so phi is accumulated tree by tree. Each tree's game only depends on
// the features it splits on; the rest are null players, and removing null
// players leaves the others' values unchanged. Enumeration therefore runs over
// the coalitions of each tree's own split features.
Attribution shapley(const DetectorModel& model, std::span<const double> x,
                    const std::vector<std::vector<double>>& background) {
  if (model.num_features > kMaxShapleyFeatures) {
    throw TooManyFeatures(fmt::format("{} features exceed the exact enumeration bound of {}",
                                      model.num_features, kMaxShapleyFeatures));
  }
  if (x.size() != model.num_features) {
    throw DimensionError(fmt::format("expected {} features, got {}", model.num_features, x.size()));
  }
  if (background.empty()) throw EmptyBackground("Shapley values need a background set");
  for (const auto& b : background) {
    if (b.size() != model.num_features) throw DimensionError("background row has the wrong width");
  }

  Attribution out;
  out.phi.assign(model.num_features, 0.0);
  const double inv_background = 1.0 / static_cast<double>(background.size());

  for (const auto& tree : model.trees) {
    const std::vector<int> local = tree.used_features();
    const std::size_t k = local.size();
    if (k == 0) continue;
    const unsigned coalitions = 1U << k;
    std::vector<double> value(coalitions, 0.0);
    for (unsigned mask = 0; mask < coalitions; ++mask) {
      double sum = 0.0;
      for (const auto& b : background) sum += hybrid_predict(tree, local, mask, x, b);
      value[mask] = sum * inv_background;
    }
    const auto weights = shapley_weights(k);
    for (std::size_t i = 0; i < k; ++i) {
      const unsigned bit = 1U << i;
      double phi = 0.0;
      for (unsigned mask = 0; mask < coalitions; ++mask) {
        if (mask & bit) continue;
        phi += weights[static_cast<std::size_t>(std::popcount(mask))] * (value[mask | bit] - value[mask]);
      }
      out.phi[static_cast<std::size_t>(local[i])] += phi;
    }
  }

  double baseline = 0.0;
  for (const auto& b : background) baseline += predict_margin(model, b);
  out.baseline = baseline * inv_background;
  return out;
}

std::vector<std::vector<double>> sample_background(const Dataset& data, std::uint64_t seed) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  rng.shuffle(order);
  order.resize(std::min(kMaxBackground, order.size()));
  std::sort(order.begin(), order.end());
  std::vector<std::vector<double>> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(data.rows[i]);
  return out;
}

std::vector<std::size_t> ImportanceReport::ranking() const {
  std::vector<std::size_t> order(kNumFeatures);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return mean_abs_phi[a] > mean_abs_phi[b];
  });
  return order;
}

ImportanceReport importance_report(const DetectorModel& model,
                                   std::span<const FeatureVector> dataset,
                                   const std::vector<std::vector<double>>& background) {
  if (dataset.empty()) throw EmptyInput("importance report over an empty dataset");
  ImportanceReport report;
  for (const auto& v : dataset) {
    const Attribution a = shapley(model, v.values, background);
    for (std::size_t i = 0; i < kNumFeatures; ++i) report.mean_abs_phi[i] += std::abs(a.phi[i]);
  }
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    report.mean_abs_phi[i] /= static_cast<double>(dataset.size());
    report.by_statistic[static_cast<std::size_t>(statistic_of_feature(i))] += report.mean_abs_phi[i];
    report.by_region[static_cast<std::size_t>(region_of_feature(i))] += report.mean_abs_phi[i];
  }
  return report;
}

std::string importance_csv(const ImportanceReport& report) {
  std::string out = "feature,region,mean_abs_phi\n";
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    out += fmt::format("{},{},{:.17g}\n", to_string(statistic_of_feature(i)),
                       to_string(region_of_feature(i)), report.mean_abs_phi[i]);
  }
  for (std::size_t s = 0; s < kNumStatistics; ++s) {
    out += fmt::format("{},all,{:.17g}\n", to_string(static_cast<Statistic>(s)),
                       report.by_statistic[s]);
  }
  for (std::size_t r = 0; r < kNumRegions; ++r) {
    out += fmt::format("all,{},{:.17g}\n", to_string(static_cast<Region>(r)), report.by_region[r]);
  }
  return out;
}

}  // namespace latent_debate
