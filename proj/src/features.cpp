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

#include "latent_debate/features.hpp"

#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "latent_debate/errors.hpp"

namespace latent_debate {

const char* to_string(Region region) {
  switch (region) {
    case Region::Lower: return "lower";
    case Region::Middle: return "middle";
    case Region::Upper: return "upper";
  }
  return "?";
}

const char* to_string(Statistic statistic) {
  switch (statistic) {
    case Statistic::NumAtk: return "NumAtk";
    case Statistic::AvgInit: return "AvgInit";
    case Statistic::AvgFin: return "AvgFin";
    case Statistic::VarInit: return "VarInit";
    case Statistic::VarFin: return "VarFin";
  }
  return "?";
}

const std::array<std::string, kNumFeatures>& feature_names() {
  static const auto names = [] {
    std::array<std::string, kNumFeatures> out;
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      out[i] = fmt::format("{}_{}", to_string(region_of_feature(i)),
                           to_string(statistic_of_feature(i)));
    }
    return out;
  }();
  return names;
}

const LayerRange& RegionPartition::operator[](Region region) const {
  switch (region) {
    case Region::Lower: return lower;
    case Region::Middle: return middle;
    case Region::Upper: return upper;
  }
  return upper;
}

Region RegionPartition::region_of(std::size_t layer) const {
  if (lower.contains(layer)) return Region::Lower;
  if (middle.contains(layer)) return Region::Middle;
  if (upper.contains(layer)) return Region::Upper;
  throw Error(fmt::format("layer {} outside partition", layer));
}

RegionPartition region_partition(std::size_t num_layers) {
  if (num_layers < 3) {
    throw TooFewLayers(fmt::format("{} layers cannot form three regions", num_layers));
  }
  const std::size_t first = num_layers / 3;
  const std::size_t second = 2 * num_layers / 3;
  return {{1, first + 1}, {first + 1, second + 1}, {second + 1, num_layers + 1}};
}

namespace {

struct Moments {
  double count = 0.0;
  double sum_init = 0.0;
  double sum_fin = 0.0;
};

}  // namespace

FeatureVector extract_features(const DebateGrid& grid, const StrengthMap& strengths,
                               const RegionPartition& partition, const DebateRecord& record) {
  const Qbaf& qbaf = grid.qbaf();
  std::array<Moments, kNumRegions> moments{};
  std::array<double, kNumRegions> attacks{};

  auto region_index = [&](std::size_t argument) {
    return static_cast<std::size_t>(partition.region_of(grid.layer_of(argument)));
  };

  for (std::size_t i = 0; i < qbaf.size(); ++i) {
    auto& m = moments[region_index(i)];
    m.count += 1.0;
    m.sum_init += qbaf.argument(i).tau;
    m.sum_fin += strengths.sigma_at(i);
  }
  for (std::size_t r = 0; r < kNumRegions; ++r) {
    if (moments[r].count == 0.0) {
      throw EmptyRegion(fmt::format("region {} has no arguments", to_string(Region(r))));
    }
  }

  // Two-pass variance around the region means.
  std::array<double, kNumRegions> sq_init{};
  std::array<double, kNumRegions> sq_fin{};
  for (std::size_t i = 0; i < qbaf.size(); ++i) {
    const std::size_t r = region_index(i);
    const double di = qbaf.argument(i).tau - moments[r].sum_init / moments[r].count;
    const double df = strengths.sigma_at(i) - moments[r].sum_fin / moments[r].count;
    sq_init[r] += di * di;
    sq_fin[r] += df * df;
  }

  const auto& links = qbaf.link_indices();
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (strengths.edge_labels()[k] == EdgeLabel::Attack) attacks[region_index(links[k].target)] += 1.0;
  }

  FeatureVector out;
  for (std::size_t r = 0; r < kNumRegions; ++r) {
    const Region region = static_cast<Region>(r);
    const double n = moments[r].count;
    out[feature_index(region, Statistic::NumAtk)] = attacks[r];
    out[feature_index(region, Statistic::AvgInit)] = moments[r].sum_init / n;
    out[feature_index(region, Statistic::AvgFin)] = moments[r].sum_fin / n;
    out[feature_index(region, Statistic::VarInit)] = sq_init[r] / n;
    out[feature_index(region, Statistic::VarFin)] = sq_fin[r] / n;
  }
  out.hallucination_label = record.model_prediction != record.gold_label ? 1 : 0;
  return out;
}

FeatureVector featurize(const DebateRecord& record, Topology topology, bool use_weights) {
  const DebateGrid grid = build_grid(record, topology, use_weights);
  const StrengthMap strengths = evaluate(grid.qbaf());
  return extract_features(grid, strengths, region_partition(record.num_layers), record);
}

namespace {

std::string header_line() {
  std::string header;
  for (const auto& name : feature_names()) header += name + ",";
  return header + "label";
}

double parse_double(std::string_view field, std::size_t row) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw SchemaError(fmt::format("row {}: '{}' is not a number", row, field));
  }
  return value;
}

}  // namespace

std::string export_table(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) throw EmptyInput("no feature vectors to export");
  std::string out = header_line() + "\n";
  for (const auto& v : vectors) {
    for (double x : v.values) out += fmt::format("{:.17g},", x);
    out += fmt::format("{}\n", v.hallucination_label);
  }
  return out;
}

std::vector<FeatureVector> parse_table(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty feature table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header_line()) throw SchemaError("unexpected feature table header");

  std::vector<FeatureVector> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    fields.push_back(rest);
    if (fields.size() != kNumFeatures + 1) {
      throw SchemaError(fmt::format("row {}: expected {} columns, got {}", row,
                                    kNumFeatures + 1, fields.size()));
    }
    FeatureVector v;
    for (std::size_t i = 0; i < kNumFeatures; ++i) v[i] = parse_double(fields[i], row);
    const double label = parse_double(fields.back(), row);
    if (label != 0.0 && label != 1.0) {
      throw SchemaError(fmt::format("row {}: label must be 0 or 1", row));
    }
    v.hallucination_label = static_cast<int>(label);
    out.push_back(v);
  }
  return out;
}

}  // namespace latent_debate
