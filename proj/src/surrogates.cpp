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

#include "latent_debate/surrogates.hpp"

#include <fmt/format.h>

#include "latent_debate/errors.hpp"
#include "latent_debate/rng.hpp"

namespace latent_debate {

const char* to_string(SurrogateMethod method) {
  switch (method) {
    case SurrogateMethod::Random: return "Random";
    case SurrogateMethod::Average: return "Average";
    case SurrogateMethod::Majority: return "Majority";
    case SurrogateMethod::TopRight: return "TopRight";
    case SurrogateMethod::LatentDebate: return "LatentDebate";
  }
  return "?";
}

namespace {

SurrogateVerdict verdict(SurrogateMethod method, double score) {
  return {method, label_from_sign(score), score};
}

}  // namespace

SurrogateVerdict random_baseline(const DebateRecord& record, std::uint64_t seed) {
  validate(record);
  SplitMix64 rng(seed);
  const std::size_t cell = rng.below(record.num_layers * record.num_tokens());
  const double p = record.p_true[cell / record.num_tokens()][cell % record.num_tokens()];
  return verdict(SurrogateMethod::Random, initial_strength(p));
}

SurrogateVerdict average_baseline(const DebateRecord& record) {
  validate(record);
  double sum = 0.0;
  for (const auto& row : record.p_true) {
    for (double p : row) sum += initial_strength(p);
  }
  return verdict(SurrogateMethod::Average,
                 sum / static_cast<double>(record.num_layers * record.num_tokens()));
}

SurrogateVerdict majority_baseline(const DebateRecord& record) {
  validate(record);
  long positives = 0;
  long negatives = 0;
  for (const auto& row : record.p_true) {
    for (double p : row) (is_positive(initial_strength(p)) ? positives : negatives) += 1;
  }
  const double total = static_cast<double>(positives + negatives);
  return verdict(SurrogateMethod::Majority, static_cast<double>(positives - negatives) / total);
}

SurrogateVerdict top_right_baseline(const DebateRecord& record) {
  validate(record);
  return verdict(SurrogateMethod::TopRight,
                 initial_strength(record.p_true.back().back()));
}

SurrogateVerdict latent_debate(const DebateRecord& record, Topology topology, bool use_weights) {
  const DebateGrid grid = build_grid(record, topology, use_weights);
  const StrengthMap strengths = evaluate(grid.qbaf());
  return verdict(SurrogateMethod::LatentDebate, strengths.sigma_at(grid.top_right()));
}

double consistency(std::span<const TruthLabel> surrogate_labels,
                   std::span<const TruthLabel> model_predictions) {
  if (surrogate_labels.size() != model_predictions.size()) {
    throw LengthMismatch(fmt::format("{} surrogate labels vs {} model predictions",
                                     surrogate_labels.size(), model_predictions.size()));
  }
  if (surrogate_labels.empty()) throw EmptyInput("consistency of an empty list");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < surrogate_labels.size(); ++i) {
    agree += surrogate_labels[i] == model_predictions[i];
  }
  return static_cast<double>(agree) / static_cast<double>(surrogate_labels.size());
}

std::string consistency_csv(std::span<const ConsistencyRow> rows) {
  std::string out = "method,n,consistency\n";
  for (const auto& row : rows) {
    out += fmt::format("{},{},{:.4f}\n", to_string(row.method), row.n, row.consistency);
  }
  return out;
}

}  // namespace latent_debate
