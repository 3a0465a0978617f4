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

#include "latent_debate/debate_graph.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "latent_debate/errors.hpp"

namespace latent_debate {

using nlohmann::ordered_json;

const char* to_string(TruthLabel label) { return label == TruthLabel::True ? "True" : "False"; }

const char* to_string(Topology topology) {
  return topology == Topology::Simple ? "simple" : "quadratic";
}

Topology parse_topology(std::string_view name) {
  if (name == "simple") return Topology::Simple;
  if (name == "quadratic") return Topology::Quadratic;
  throw Error(fmt::format("unknown topology '{}' (expected simple or quadratic)", name));
}

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

const ordered_json& require(const ordered_json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(fmt::format("missing field '{}'", key));
  return *it;
}

std::string require_string(const ordered_json& doc, const char* key) {
  const auto& value = require(doc, key);
  if (!value.is_string()) throw SchemaError(fmt::format("field '{}' must be a string", key));
  return value.get<std::string>();
}

std::size_t require_count(const ordered_json& doc, const char* key) {
  const auto& value = require(doc, key);
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw SchemaError(fmt::format("field '{}' must be a non-negative integer", key));
  }
  return value.get<std::size_t>();
}

double require_number(const ordered_json& value, const std::string& where) {
  if (!value.is_number()) throw SchemaError(fmt::format("{} must be a number", where));
  return value.get<double>();
}

TruthLabel require_label(const ordered_json& doc, const char* key) {
  const std::string text = require_string(doc, key);
  if (text == "True") return TruthLabel::True;
  if (text == "False") return TruthLabel::False;
  throw SchemaError(fmt::format("field '{}' must be \"True\" or \"False\", got \"{}\"", key, text));
}

}  // namespace

void validate(const DebateRecord& record) {
  if (record.num_layers < 1) throw ShapeError("num_layers must be at least 1");
  if (record.tokens.empty()) throw ShapeError("tokens must not be empty");
  if (record.p_true.size() != record.num_layers) {
    throw ShapeError(fmt::format("p_true has {} rows but num_layers is {}", record.p_true.size(),
                                 record.num_layers));
  }
  for (std::size_t l = 0; l < record.p_true.size(); ++l) {
    if (record.p_true[l].size() != record.tokens.size()) {
      throw ShapeError(fmt::format("p_true row {} has {} entries, expected {}", l + 1,
                                   record.p_true[l].size(), record.tokens.size()));
    }
    for (std::size_t n = 0; n < record.p_true[l].size(); ++n) {
      if (!in_unit_interval(record.p_true[l][n])) {
        throw RangeError(fmt::format("p_true[{}][{}] = {} outside [0, 1]", l + 1, n + 1,
                                     record.p_true[l][n]));
      }
    }
  }
  for (std::size_t n = 0; n < record.tokens.size(); ++n) {
    if (!in_unit_interval(record.tokens[n].weight)) {
      throw RangeError(fmt::format("token {} weight {} outside [0, 1]", n + 1,
                                   record.tokens[n].weight));
    }
  }
}

DebateRecord parse_record(std::string_view document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(fmt::format("malformed JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw SchemaError("record must be a JSON object");

  const auto& version = require(doc, "schema_version");
  if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion) {
    throw SchemaError(fmt::format("schema_version must be {}", kSchemaVersion));
  }

  DebateRecord record;
  record.claim = require_string(doc, "claim");
  record.gold_label = require_label(doc, "gold_label");
  record.model_prediction = require_label(doc, "model_prediction");

  const auto& tokens = require(doc, "tokens");
  if (!tokens.is_array()) throw SchemaError("field 'tokens' must be an array");
  for (std::size_t n = 0; n < tokens.size(); ++n) {
    const auto& token = tokens[n];
    if (!token.is_object()) throw SchemaError(fmt::format("tokens[{}] must be an object", n));
    Token parsed;
    parsed.text = require_string(token, "text");
    parsed.weight = require_number(require(token, "weight"), fmt::format("tokens[{}].weight", n));
    record.tokens.push_back(std::move(parsed));
  }

  record.num_layers = require_count(doc, "num_layers");

  const auto& matrix = require(doc, "p_true");
  if (!matrix.is_array()) throw SchemaError("field 'p_true' must be an array");
  for (std::size_t l = 0; l < matrix.size(); ++l) {
    const auto& row = matrix[l];
    if (!row.is_array()) throw SchemaError(fmt::format("p_true[{}] must be an array", l));
    std::vector<double> values;
    values.reserve(row.size());
    for (std::size_t n = 0; n < row.size(); ++n) {
      values.push_back(require_number(row[n], fmt::format("p_true[{}][{}]", l, n)));
    }
    record.p_true.push_back(std::move(values));
  }

  const auto& metadata = require(doc, "metadata");
  if (!metadata.is_object()) throw SchemaError("field 'metadata' must be an object");
  record.metadata = metadata;

  validate(record);
  return record;
}

std::string to_json(const DebateRecord& record) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["claim"] = record.claim;
  doc["gold_label"] = to_string(record.gold_label);
  doc["model_prediction"] = to_string(record.model_prediction);
  doc["tokens"] = ordered_json::array();
  for (const auto& token : record.tokens) {
    doc["tokens"].push_back({{"text", token.text}, {"weight", token.weight}});
  }
  doc["num_layers"] = record.num_layers;
  doc["p_true"] = record.p_true;
  doc["metadata"] = record.metadata;
  return doc.dump();
}

namespace {

template <typename E>
[[noreturn]] void rethrow_with_line(const E& e, std::size_t line) {
  throw E(fmt::format("line {}: {}", line, e.what()));
}

}  // namespace

std::vector<DebateRecord> parse_corpus(std::istream& in) {
  std::vector<DebateRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_record(line));
    } catch (const SchemaError& e) {
      rethrow_with_line(e, line_number);
    } catch (const ShapeError& e) {
      rethrow_with_line(e, line_number);
    } catch (const RangeError& e) {
      rethrow_with_line(e, line_number);
    }
  }
  return records;
}

double initial_strength(double p_true) {
  if (!in_unit_interval(p_true)) {
    throw RangeError(fmt::format("probability {} outside [0, 1]", p_true));
  }
  return 2.0 * p_true - 1.0;
}

std::string cell_id(std::size_t layer, std::size_t token) {
  return fmt::format("L{}T{}", layer, token);
}

DebateGrid::DebateGrid(Qbaf qbaf, std::size_t num_layers, std::size_t num_tokens,
                       std::vector<std::size_t> cell_to_argument)
    : qbaf_(std::move(qbaf)),
      num_layers_(num_layers),
      num_tokens_(num_tokens),
      cell_to_argument_(std::move(cell_to_argument)),
      layer_of_(qbaf_.size()) {
  for (std::size_t cell = 0; cell < cell_to_argument_.size(); ++cell) {
    layer_of_[cell_to_argument_[cell]] = cell / num_tokens_ + 1;
  }
}

std::size_t DebateGrid::argument_at(std::size_t layer, std::size_t token) const {
  if (layer < 1 || layer > num_layers_ || token < 1 || token > num_tokens_) {
    throw Error(fmt::format("cell ({}, {}) outside {} x {} grid", layer, token, num_layers_,
                            num_tokens_));
  }
  return cell_to_argument_[(layer - 1) * num_tokens_ + (token - 1)];
}

DebateGrid build_grid(const DebateRecord& record, Topology topology, bool use_weights) {
  validate(record);
  const std::size_t layers = record.num_layers;
  const std::size_t tokens = record.num_tokens();

  std::vector<Argument> arguments;
  arguments.reserve(layers * tokens);
  for (std::size_t l = 1; l <= layers; ++l) {
    for (std::size_t n = 1; n <= tokens; ++n) {
      arguments.push_back({cell_id(l, n), initial_strength(record.p_true[l - 1][n - 1]),
                           use_weights ? record.tokens[n - 1].weight : 1.0});
    }
  }

  std::vector<Link> links;
  for (std::size_t l = 1; l <= layers; ++l) {
    if (topology == Topology::Simple) {
      for (std::size_t n = 1; n < tokens; ++n) links.push_back({cell_id(l, n), cell_id(l, n + 1)});
    } else {
      for (std::size_t from = 1; from < tokens; ++from) {
        for (std::size_t to = from + 1; to <= tokens; ++to) {
          links.push_back({cell_id(l, from), cell_id(l, to)});
        }
      }
    }
  }
  for (std::size_t l = 1; l < layers; ++l) {
    links.push_back({cell_id(l, tokens), cell_id(l + 1, tokens)});
  }

  std::vector<std::size_t> cells(layers * tokens);
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
  return DebateGrid(build_qbaf(std::move(arguments), std::move(links)), layers, tokens,
                    std::move(cells));
}

TruthLabel decide(const StrengthMap& strengths, const DebateGrid& grid) {
  return label_from_sign(strengths.sigma_at(grid.top_right()));
}

}  // namespace latent_debate
