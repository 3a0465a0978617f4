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

// Extraction records and the token x layer argument grid built from them.

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "latent_debate/qbaf.hpp"

namespace latent_debate {

enum class TruthLabel { False, True };

const char* to_string(TruthLabel label);
inline TruthLabel label_from_sign(double x) {
  return is_positive(x) ? TruthLabel::True : TruthLabel::False;
}

struct Token {
  std::string text;
  double weight = 1.0;
};

inline constexpr int kSchemaVersion = 1;

/// One claim's extraction. p_true[l][n] holds P(True) for layer l + 1 and
/// token n; layer 1 is the first transformer layer, the output layer is not
/// included.
struct DebateRecord {
  std::string claim;
  TruthLabel gold_label = TruthLabel::True;
  TruthLabel model_prediction = TruthLabel::True;
  std::vector<Token> tokens;
  std::size_t num_layers = 0;
  std::vector<std::vector<double>> p_true;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

  std::size_t num_tokens() const { return tokens.size(); }
};

/// Throws ShapeError or RangeError.
void validate(const DebateRecord& record);

/// Parses one JSON document. Throws SchemaError, ShapeError or RangeError.
DebateRecord parse_record(std::string_view document);

/// Serializes in the key order of the record schema, one line, no trailing newline.
std::string to_json(const DebateRecord& record);

/// Reads a JSON-lines corpus; blank lines are skipped. Errors are rethrown with
/// "line N:" prepended, keeping their type.
std::vector<DebateRecord> parse_corpus(std::istream& in);

/// tau = 2p - 1. Throws RangeError outside [0, 1].
double initial_strength(double p_true);

enum class Topology { Simple, Quadratic };

const char* to_string(Topology topology);
/// "simple" or "quadratic"; throws Error otherwise.
Topology parse_topology(std::string_view name);

/// A Qbaf whose arguments are the grid cells, together with the cell layout.
/// Argument ids are "L<layer>T<token>", both 1-based.
class DebateGrid {
 public:
  DebateGrid(Qbaf qbaf, std::size_t num_layers, std::size_t num_tokens,
             std::vector<std::size_t> cell_to_argument);

  const Qbaf& qbaf() const { return qbaf_; }
  std::size_t num_layers() const { return num_layers_; }
  std::size_t num_tokens() const { return num_tokens_; }

  /// Argument index of a cell; layer and token are 1-based.
  std::size_t argument_at(std::size_t layer, std::size_t token) const;
  /// 1-based layer of an argument index.
  std::size_t layer_of(std::size_t argument) const { return layer_of_[argument]; }
  std::size_t top_right() const { return argument_at(num_layers_, num_tokens_); }

 private:
  Qbaf qbaf_;
  std::size_t num_layers_;
  std::size_t num_tokens_;
  std::vector<std::size_t> cell_to_argument_;
  std::vector<std::size_t> layer_of_;
};

std::string cell_id(std::size_t layer, std::size_t token);

/// Simple: left-to-right chain in each layer plus a chain through the rightmost
/// cells from layer 1 upwards. Quadratic: every earlier token links to every
/// later token within a layer, plus the same vertical chain. With use_weights
/// off every argument gets weight 1.
DebateGrid build_grid(const DebateRecord& record, Topology topology, bool use_weights);

/// True iff the top-right argument's final strength is >= 0.
TruthLabel decide(const StrengthMap& strengths, const DebateGrid& grid);

}  // namespace latent_debate
