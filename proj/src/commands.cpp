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

#include "latent_debate/commands.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "latent_debate/errors.hpp"
#include "latent_debate/features.hpp"
#include "latent_debate/rng.hpp"

namespace latent_debate {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(fmt::format("error reading '{}'", path.string()));
  return content;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  if (!out) throw IoError(fmt::format("error writing '{}'", path.string()));
}

std::vector<DebateRecord> load_corpus(const fs::path& path) {
  std::istringstream in(read_file(path));
  try {
    return parse_corpus(in);
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

CorpusVerdicts evaluate_corpus(const std::vector<DebateRecord>& records, const GraphOptions& graph,
                               std::uint64_t seed) {
  CorpusVerdicts out;
  out.per_record.reserve(records.size());
  std::array<std::vector<TruthLabel>, 5> labels;
  std::vector<TruthLabel> predictions;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const DebateRecord& record = records[i];
    out.per_record.push_back({random_baseline(record, derive_seed(seed, i)),
                              average_baseline(record), majority_baseline(record),
                              top_right_baseline(record),
                              latent_debate(record, graph.topology, graph.use_weights)});
    for (std::size_t m = 0; m < 5; ++m) labels[m].push_back(out.per_record.back()[m].label);
    predictions.push_back(record.model_prediction);
  }
  if (!records.empty()) {
    for (std::size_t m = 0; m < 5; ++m) {
      out.summary.push_back({kAllMethods[m], records.size(), consistency(labels[m], predictions)});
    }
  }
  return out;
}

std::string cmd_evaluate(const fs::path& corpus, const GraphOptions& graph, std::uint64_t seed) {
  const auto records = load_corpus(corpus);
  if (records.empty()) throw EmptyInput(fmt::format("'{}' contains no records", corpus.string()));
  const CorpusVerdicts verdicts = evaluate_corpus(records, graph, seed);

  std::string out = "record,model_prediction";
  for (auto method : kAllMethods) out += fmt::format(",{}", to_string(method));
  out += '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    out += fmt::format("{},{}", i + 1, to_string(records[i].model_prediction));
    for (const auto& v : verdicts.per_record[i]) out += fmt::format(",{}", to_string(v.label));
    out += '\n';
  }
  out += '\n';
  out += consistency_csv(verdicts.summary);
  return out;
}

std::string cmd_render(const fs::path& record_path, RenderFormat format, const GraphOptions& graph) {
  DebateRecord record;
  try {
    record = parse_record(read_file(record_path));
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", record_path.string(), e.what()));
  }
  const DebateGrid grid = build_grid(record, graph.topology, graph.use_weights);
  const StrengthMap strengths = evaluate(grid.qbaf());
  return format == RenderFormat::Svg ? render_svg(record, grid, strengths)
                                     : render_ansi(record, grid, strengths);
}

std::string cmd_features(const fs::path& corpus, const GraphOptions& graph) {
  const auto records = load_corpus(corpus);
  std::vector<FeatureVector> vectors;
  vectors.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      vectors.push_back(featurize(records[i], graph.topology, graph.use_weights));
    } catch (const Error& e) {
      throw Error(fmt::format("{}: record {}: {}", corpus.string(), i + 1, e.what()));
    }
  }
  if (vectors.empty()) throw EmptyInput(fmt::format("'{}' contains no records", corpus.string()));
  return export_table(vectors);
}

DetectorConfig load_config(const std::optional<fs::path>& path,
                           std::optional<std::uint64_t> seed_override) {
  DetectorConfig config;
  if (path) {
    try {
      config = config_from_json(nlohmann::json::parse(read_file(*path)));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(fmt::format("{}: {}", path->string(), e.what()));
    }
  }
  if (seed_override) config.seed = *seed_override;
  config.validate();
  return config;
}

TrainOutcome train_and_evaluate(const std::vector<FeatureVector>& vectors,
                                const DetectorConfig& config) {
  auto [train_set, test_set] = split_dataset(vectors, config);
  TrainOutcome outcome;
  outcome.model = train(train_set, config);
  outcome.train_size = train_set.size();
  outcome.test_size = test_set.size();
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& v : test_set) {
    scores.push_back(predict_proba(outcome.model, v));
    labels.push_back(v.hallucination_label);
  }
  outcome.test_auroc = auroc(scores, labels);
  return outcome;
}

std::string cmd_train(const fs::path& features, const DetectorConfig& config, std::string* summary) {
  const auto vectors = parse_table(read_file(features));
  const TrainOutcome outcome = train_and_evaluate(vectors, config);
  if (summary) {
    *summary = fmt::format("train={} test={} test_auroc={:.4f}", outcome.train_size,
                           outcome.test_size, outcome.test_auroc);
  }
  return to_json(outcome.model).dump(2) + "\n";
}

std::string cmd_explain(const fs::path& features, const fs::path& model_path) {
  const auto vectors = parse_table(read_file(features));
  DetectorModel model;
  try {
    model = model_from_json(nlohmann::json::parse(read_file(model_path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(fmt::format("{}: {}", model_path.string(), e.what()));
  }
  const auto background = sample_background(to_dataset(vectors), model.config.seed);
  return importance_csv(importance_report(model, vectors, background));
}

}  // namespace latent_debate
