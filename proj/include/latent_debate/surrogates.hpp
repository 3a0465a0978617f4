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

// Baseline surrogates and the consistency score against the model's own
// predictions.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latent_debate/debate_graph.hpp"

namespace latent_debate {

enum class SurrogateMethod { Random, Average, Majority, TopRight, LatentDebate };

inline constexpr SurrogateMethod kAllMethods[] = {
    SurrogateMethod::Random, SurrogateMethod::Average, SurrogateMethod::Majority,
    SurrogateMethod::TopRight, SurrogateMethod::LatentDebate};

const char* to_string(SurrogateMethod method);

struct SurrogateVerdict {
  SurrogateMethod method;
  TruthLabel label;
  double score;  // signed evidence; label == True iff score >= 0
};

/// Picks one cell uniformly with SplitMix64(seed) and reports its tau.
SurrogateVerdict random_baseline(const DebateRecord& record, std::uint64_t seed);
/// Mean tau over every (layer, token) cell.
SurrogateVerdict average_baseline(const DebateRecord& record);
/// Vote of tau signs; ties go to True. score = (positives - negatives) / cells.
SurrogateVerdict majority_baseline(const DebateRecord& record);
/// tau of the last token in the last layer, no propagation.
SurrogateVerdict top_right_baseline(const DebateRecord& record);
/// Evaluates the grid and reports sigma of the top-right argument.
SurrogateVerdict latent_debate(const DebateRecord& record, Topology topology, bool use_weights);

/// Fraction of positions where the two label lists agree.
/// Throws EmptyInput or LengthMismatch.
double consistency(std::span<const TruthLabel> surrogate_labels,
                   std::span<const TruthLabel> model_predictions);

struct ConsistencyRow {
  SurrogateMethod method;
  std::size_t n;
  double consistency;
};

/// `method,n,consistency` with the fraction printed to 4 decimals.
std::string consistency_csv(std::span<const ConsistencyRow> rows);

}  // namespace latent_debate
