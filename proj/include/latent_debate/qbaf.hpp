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

// Acyclic quantitative bipolar argumentation frameworks and their evaluation
// under the tanh energy/influence gradual semantics.
//
// Links are stored without polarity. Whether a link attacks or supports its
// target is derived after evaluation by comparing the source's final strength
// with the target's initial strength (see classify_edges).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace latent_debate {

using ArgumentId = std::string;

struct Argument {
  ArgumentId id;
  double tau = 0.0;     // initial strength in [-1, 1]
  double weight = 1.0;  // token-wise weight in [0, 1]
};

struct Link {
  ArgumentId source;
  ArgumentId target;

  friend bool operator==(const Link&, const Link&) = default;
};

enum class EdgeLabel { Attack, Support };

const char* to_string(EdgeLabel label);

/// Polarity rule shared by the whole library: zero counts as positive.
constexpr bool is_positive(double x) { return x >= 0.0; }

/// Index-based view of a link, parallel to Qbaf::links().
struct LinkIndex {
  std::size_t source;
  std::size_t target;
};

class Qbaf {
 public:
  Qbaf() = default;

  const std::vector<Argument>& arguments() const { return arguments_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<LinkIndex>& link_indices() const { return link_indices_; }

  std::size_t size() const { return arguments_.size(); }
  bool empty() const { return arguments_.empty(); }

  const Argument& argument(std::size_t index) const { return arguments_[index]; }
  std::optional<std::size_t> find(const ArgumentId& id) const;
  /// Throws UnknownArgumentError.
  std::size_t index_of(const ArgumentId& id) const;

  /// Parent argument indices of `index`, in link insertion order.
  const std::vector<std::size_t>& parents(std::size_t index) const { return parents_[index]; }
  const std::vector<std::size_t>& children(std::size_t index) const { return children_[index]; }

  /// Kahn ordering; among ready arguments the smallest id goes first.
  const std::vector<std::size_t>& topological_order() const { return order_; }

  /// True when `order` is a permutation of all indices respecting every link.
  bool is_topological(std::span<const std::size_t> order) const;

 private:
  friend Qbaf build_qbaf(std::vector<Argument> arguments, std::vector<Link> links);

  std::vector<Argument> arguments_;
  std::vector<Link> links_;
  std::vector<LinkIndex> link_indices_;
  std::unordered_map<ArgumentId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> order_;
};

/// Validates and freezes a framework.
/// Throws RangeError, DuplicateIdError, UnknownArgumentError (link endpoint
/// not declared), CycleError (self-links included) and DuplicateLinkError.
Qbaf build_qbaf(std::vector<Argument> arguments, std::vector<Link> links);

/// Final strengths indexed like Qbaf::arguments(), edge labels like Qbaf::links().
class StrengthMap {
 public:
  StrengthMap() = default;
  StrengthMap(std::vector<double> sigma, std::vector<EdgeLabel> edge_labels)
      : sigma_(std::move(sigma)), edge_labels_(std::move(edge_labels)) {}

  const std::vector<double>& sigma() const { return sigma_; }
  const std::vector<EdgeLabel>& edge_labels() const { return edge_labels_; }

  double sigma_at(std::size_t index) const { return sigma_[index]; }
  double sigma_of(const Qbaf& qbaf, const ArgumentId& id) const {
    return sigma_[qbaf.index_of(id)];
  }
  EdgeLabel label_of(const Qbaf& qbaf, const Link& link) const;

  friend bool operator==(const StrengthMap&, const StrengthMap&) = default;

 private:
  std::vector<double> sigma_;
  std::vector<EdgeLabel> edge_labels_;
};

/// Strengths computed so far during a pass; nullopt means "not yet evaluated".
using PartialStrengths = std::vector<std::optional<double>>;

/// Sum of the parents' final strengths. Parents are summed in link order, so
/// the result does not depend on the evaluation order that produced them.
/// Throws MissingParentStrength when a parent has not been evaluated.
double aggregate_energy(const Qbaf& qbaf, std::size_t target, const PartialStrengths& sigma);

/// sigma = tanh(E) + w * tau * (1 - tanh(|E|)).
///
/// Evaluated as c + tanh(E) * (1 - sign(E) * c) with c = w * tau, which is the
/// same expression but keeps every rounding step monotone in E, so the
/// non-decreasing property survives floating point.
double influence(double energy, double tau, double weight);

/// Single topological pass followed by edge classification.
StrengthMap evaluate(const Qbaf& qbaf);

/// Same as evaluate() but walks a caller-supplied order. Throws Error when
/// `order` is not a topological order of `qbaf`.
StrengthMap evaluate_in_order(const Qbaf& qbaf, std::span<const std::size_t> order);

/// Attack iff polarity(sigma(source)) != polarity(tau(target)).
std::vector<EdgeLabel> classify_edges(const Qbaf& qbaf, std::span<const double> sigma);

/// Debug JSON: arguments with tau/weight/sigma and labelled links, numbers
/// printed with 17 significant digits.
std::string dump_json(const Qbaf& qbaf, const StrengthMap& strengths);

}  // namespace latent_debate
