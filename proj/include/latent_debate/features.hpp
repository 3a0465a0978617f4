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

// Per-region debate statistics used as detector inputs.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latent_debate/debate_graph.hpp"
#include "latent_debate/qbaf.hpp"

namespace latent_debate {

enum class Region { Lower = 0, Middle = 1, Upper = 2 };
enum class Statistic { NumAtk = 0, AvgInit = 1, AvgFin = 2, VarInit = 3, VarFin = 4 };

inline constexpr std::size_t kNumRegions = 3;
inline constexpr std::size_t kNumStatistics = 5;
inline constexpr std::size_t kNumFeatures = kNumRegions * kNumStatistics;

const char* to_string(Region region);
const char* to_string(Statistic statistic);

constexpr std::size_t feature_index(Region region, Statistic statistic) {
  return static_cast<std::size_t>(region) * kNumStatistics + static_cast<std::size_t>(statistic);
}
constexpr Region region_of_feature(std::size_t index) {
  return static_cast<Region>(index / kNumStatistics);
}
constexpr Statistic statistic_of_feature(std::size_t index) {
  return static_cast<Statistic>(index % kNumStatistics);
}

/// "lower_NumAtk" ... "upper_VarFin", in column order.
const std::array<std::string, kNumFeatures>& feature_names();

/// Half-open range of 1-based layer indices.
struct LayerRange {
  std::size_t begin;
  std::size_t end;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t layer) const { return layer >= begin && layer < end; }
  friend bool operator==(const LayerRange&, const LayerRange&) = default;
};

struct RegionPartition {
  LayerRange lower;
  LayerRange middle;
  LayerRange upper;

  const LayerRange& operator[](Region region) const;
  Region region_of(std::size_t layer) const;
};

/// Boundaries at floor(L / 3) and floor(2L / 3). Throws TooFewLayers for L < 3.
RegionPartition region_partition(std::size_t num_layers);

struct FeatureVector {
  std::array<double, kNumFeatures> values{};
  int hallucination_label = 0;  // 1 iff model_prediction != gold_label

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double get(Region region, Statistic statistic) const {
    return values[feature_index(region, statistic)];
  }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Statistics over every argument whose layer falls in each region. Attack
/// links are counted in the region of their target. Variances divide by n.
/// Throws EmptyRegion.
FeatureVector extract_features(const DebateGrid& grid, const StrengthMap& strengths,
                               const RegionPartition& partition, const DebateRecord& record);

/// Builds, evaluates and featurizes one record.
FeatureVector featurize(const DebateRecord& record, Topology topology, bool use_weights);

/// Header plus one row per vector. Throws EmptyInput.
std::string export_table(std::span<const FeatureVector> vectors);

/// Inverse of export_table. Throws SchemaError on a bad header or row.
std::vector<FeatureVector> parse_table(std::string_view csv);

}  // namespace latent_debate
