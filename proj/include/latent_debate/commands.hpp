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

// Subcommand bodies shared by the command-line tool and the tests. Each
// returns the text it produced; the tool decides where it goes.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "latent_debate/debate_graph.hpp"
#include "latent_debate/detector.hpp"
#include "latent_debate/render.hpp"
#include "latent_debate/surrogates.hpp"

namespace latent_debate {

/// Throws IoError naming the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

std::vector<DebateRecord> load_corpus(const std::filesystem::path& path);

struct GraphOptions {
  Topology topology = Topology::Simple;
  bool use_weights = true;
};

struct CorpusVerdicts {
  std::vector<std::array<SurrogateVerdict, 5>> per_record;  // kAllMethods order
  std::vector<ConsistencyRow> summary;
};

/// Record i's Random baseline is seeded with derive_seed(seed, i).
CorpusVerdicts evaluate_corpus(const std::vector<DebateRecord>& records, const GraphOptions& graph,
                               std::uint64_t seed);

/// Per-record verdict table, a blank line, then the consistency CSV.
std::string cmd_evaluate(const std::filesystem::path& corpus, const GraphOptions& graph,
                         std::uint64_t seed);

std::string cmd_render(const std::filesystem::path& record, RenderFormat format,
                       const GraphOptions& graph);

std::string cmd_features(const std::filesystem::path& corpus, const GraphOptions& graph);

struct TrainOutcome {
  DetectorModel model;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double test_auroc = 0.0;
};

DetectorConfig load_config(const std::optional<std::filesystem::path>& path,
                           std::optional<std::uint64_t> seed_override);

/// Splits, trains on the training half and scores the held-out half.
TrainOutcome train_and_evaluate(const std::vector<FeatureVector>& vectors,
                                const DetectorConfig& config);

/// Returns the model JSON; `summary` receives a one-line AUROC report.
std::string cmd_train(const std::filesystem::path& features, const DetectorConfig& config,
                      std::string* summary = nullptr);

/// Importance CSV over every row of `features`, background drawn with the
/// model's seed.
std::string cmd_explain(const std::filesystem::path& features, const std::filesystem::path& model);

}  // namespace latent_debate
