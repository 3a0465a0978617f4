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

#include "latent_debate/qbaf.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "latent_debate/errors.hpp"
#include "json.hpp"

namespace latent_debate {

const char* to_string(EdgeLabel label) {
  return label == EdgeLabel::Attack ? "attack" : "support";
}

std::optional<std::size_t> Qbaf::find(const ArgumentId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Qbaf::index_of(const ArgumentId& id) const {
  auto found = find(id);
  if (!found) throw UnknownArgumentError(fmt::format("unknown argument id '{}'", id));
  return *found;
}

bool Qbaf::is_topological(std::span<const std::size_t> order) const {
  if (order.size() != size()) return false;
  std::vector<std::size_t> position(size(), size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (order[pos] >= size() || position[order[pos]] != size()) return false;
    position[order[pos]] = pos;
  }
  for (const auto& link : link_indices_) {
    if (position[link.source] >= position[link.target]) return false;
  }
  return true;
}

Qbaf build_qbaf(std::vector<Argument> arguments, std::vector<Link> links) {
  Qbaf qbaf;
  qbaf.index_.reserve(arguments.size());
  for (std::size_t i = 0; i < arguments.size(); ++i) {
    const Argument& arg = arguments[i];
    if (!(arg.tau >= -1.0 && arg.tau <= 1.0)) {
      throw RangeError(fmt::format("argument '{}': tau {} outside [-1, 1]", arg.id, arg.tau));
    }
    if (!(arg.weight >= 0.0 && arg.weight <= 1.0)) {
      throw RangeError(
          fmt::format("argument '{}': weight {} outside [0, 1]", arg.id, arg.weight));
    }
    if (!qbaf.index_.emplace(arg.id, i).second) {
      throw DuplicateIdError(fmt::format("duplicate argument id '{}'", arg.id));
    }
  }

  const std::size_t n = arguments.size();
  qbaf.parents_.assign(n, {});
  qbaf.children_.assign(n, {});
  qbaf.link_indices_.reserve(links.size());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Link& link : links) {
    const std::size_t src = qbaf.index_of(link.source);
    const std::size_t dst = qbaf.index_of(link.target);
    if (src == dst) throw CycleError(fmt::format("self-link on '{}'", link.source));
    if (!seen.emplace(src, dst).second) {
      throw DuplicateLinkError(
          fmt::format("duplicate link '{}' -> '{}'", link.source, link.target));
    }
    qbaf.link_indices_.push_back({src, dst});
    qbaf.parents_[dst].push_back(src);
    qbaf.children_[src].push_back(dst);
  }

  // Kahn's algorithm with the ready set ordered by id.
  std::vector<std::size_t> in_degree(n);
  for (std::size_t i = 0; i < n; ++i) in_degree[i] = qbaf.parents_[i].size();
  auto by_id = [&arguments](std::size_t a, std::size_t b) {
    return arguments[a].id > arguments[b].id;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
  for (std::size_t i = 0; i < n; ++i) {
    if (in_degree[i] == 0) ready.push(i);
  }
  qbaf.order_.reserve(n);
  while (!ready.empty()) {
    const std::size_t next = ready.top();
    ready.pop();
    qbaf.order_.push_back(next);
    for (std::size_t child : qbaf.children_[next]) {
      if (--in_degree[child] == 0) ready.push(child);
    }
  }
  if (qbaf.order_.size() != n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (in_degree[i] != 0) {
        throw CycleError(fmt::format("link graph has a cycle through '{}'", arguments[i].id));
      }
    }
  }

  qbaf.arguments_ = std::move(arguments);
  qbaf.links_ = std::move(links);
  return qbaf;
}

EdgeLabel StrengthMap::label_of(const Qbaf& qbaf, const Link& link) const {
  const auto& links = qbaf.links();
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i] == link) return edge_labels_[i];
  }
  throw UnknownArgumentError(fmt::format("no link '{}' -> '{}'", link.source, link.target));
}

double aggregate_energy(const Qbaf& qbaf, std::size_t target, const PartialStrengths& sigma) {
  double energy = 0.0;
  for (std::size_t parent : qbaf.parents(target)) {
    if (!sigma[parent]) {
      throw MissingParentStrength(fmt::format("'{}' evaluated before its parent '{}'",
                                              qbaf.argument(target).id,
                                              qbaf.argument(parent).id));
    }
    energy += *sigma[parent];
  }
  return energy;
}

double influence(double energy, double tau, double weight) {
  const double c = weight * tau;
  const double t = std::tanh(energy);
  return energy >= 0.0 ? c + t * (1.0 - c) : c + t * (1.0 + c);
}

std::vector<EdgeLabel> classify_edges(const Qbaf& qbaf, std::span<const double> sigma) {
  std::vector<EdgeLabel> labels;
  labels.reserve(qbaf.links().size());
  for (const auto& link : qbaf.link_indices()) {
    const bool same = is_positive(sigma[link.source]) == is_positive(qbaf.argument(link.target).tau);
    labels.push_back(same ? EdgeLabel::Support : EdgeLabel::Attack);
  }
  return labels;
}

StrengthMap evaluate_in_order(const Qbaf& qbaf, std::span<const std::size_t> order) {
  if (!qbaf.is_topological(order)) throw Error("evaluation order is not topological");
  PartialStrengths partial(qbaf.size());
  for (std::size_t index : order) {
    const Argument& arg = qbaf.argument(index);
    partial[index] = influence(aggregate_energy(qbaf, index, partial), arg.tau, arg.weight);
  }
  std::vector<double> sigma(qbaf.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = *partial[i];
  auto labels = classify_edges(qbaf, sigma);
  return StrengthMap(std::move(sigma), std::move(labels));
}

StrengthMap evaluate(const Qbaf& qbaf) {
  return evaluate_in_order(qbaf, qbaf.topological_order());
}

std::string dump_json(const Qbaf& qbaf, const StrengthMap& strengths) {
  auto quote = [](const std::string& s) { return nlohmann::json(s).dump(); };
  std::string out = "{\"arguments\":[";
  for (std::size_t i = 0; i < qbaf.size(); ++i) {
    const Argument& arg = qbaf.argument(i);
    if (i) out += ',';
    out += fmt::format(R"({{"id":{},"tau":{:.17g},"weight":{:.17g},"sigma":{:.17g}}})",
                       quote(arg.id), arg.tau, arg.weight, strengths.sigma_at(i));
  }
  out += "],\"links\":[";
  for (std::size_t i = 0; i < qbaf.links().size(); ++i) {
    const Link& link = qbaf.links()[i];
    if (i) out += ',';
    out += fmt::format(R"({{"src":{},"dst":{},"label":"{}"}})", quote(link.source),
                       quote(link.target), to_string(strengths.edge_labels()[i]));
  }
  out += "]}";
  return out;
}

}  // namespace latent_debate
