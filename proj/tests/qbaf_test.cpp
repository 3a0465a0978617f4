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

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "latent_debate/errors.hpp"
#include "latent_debate/rng.hpp"
#include "support/oracles.hpp"

namespace ld = latent_debate;
using doctest::Approx;

namespace {

// alpha <- beta <- gamma, alpha <- delta
ld::Qbaf football_example() {
  return ld::build_qbaf({{"alpha", 0.5, 1.0}, {"beta", -0.5, 1.0}, {"gamma", 0.1, 1.0},
                         {"delta", 0.6, 1.0}},
                        {{"gamma", "beta"}, {"beta", "alpha"}, {"delta", "alpha"}});
}

struct RandomGraph {
  std::vector<ld::Argument> arguments;
  std::vector<ld::Link> links;
};

// Nodes get shuffled ids; links only go from lower to higher position in a
// hidden permutation, so the graph is acyclic.
RandomGraph random_dag(ld::SplitMix64& rng, std::size_t max_nodes) {
  RandomGraph g;
  const std::size_t n = 1 + rng.below(max_nodes);
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = i;
  rng.shuffle(rank);
  for (std::size_t i = 0; i < n; ++i) {
    g.arguments.push_back({"n" + std::to_string(rank[i]), 2.0 * rng.uniform() - 1.0,
                           rng.below(4) == 0 ? 1.0 : rng.uniform()});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.below(3) == 0) g.links.push_back({g.arguments[i].id, g.arguments[j].id});
    }
  }
  return g;
}

}  // namespace

TEST_CASE("build_qbaf accepts the worked example and orders leaves first") {
  const ld::Qbaf q = football_example();
  CHECK(q.size() == 4);
  const auto& order = q.topological_order();
  std::set<std::string> first_two{q.argument(order[0]).id, q.argument(order[1]).id};
  CHECK(first_two == std::set<std::string>{"gamma", "delta"});
  CHECK(q.is_topological(order));
}

TEST_CASE("build_qbaf edge cases") {
  SUBCASE("empty framework") {
    const ld::Qbaf q = ld::build_qbaf({}, {});
    CHECK(q.empty());
    CHECK(ld::evaluate(q).sigma().empty());
  }
  SUBCASE("two-cycle") {
    CHECK_THROWS_AS(ld::build_qbaf({{"a", 0.1, 1.0}, {"b", 0.2, 1.0}}, {{"a", "b"}, {"b", "a"}}),
                    ld::CycleError);
  }
  SUBCASE("longer cycle") {
    CHECK_THROWS_AS(ld::build_qbaf({{"a", 0, 1}, {"b", 0, 1}, {"c", 0, 1}},
                                   {{"a", "b"}, {"b", "c"}, {"c", "a"}}),
                    ld::CycleError);
  }
  SUBCASE("self-link") {
    CHECK_THROWS_AS(ld::build_qbaf({{"a", 0.1, 1.0}}, {{"a", "a"}}), ld::CycleError);
  }
  SUBCASE("duplicate link") {
    CHECK_THROWS_AS(ld::build_qbaf({{"a", 0, 1}, {"b", 0, 1}}, {{"a", "b"}, {"a", "b"}}),
                    ld::DuplicateLinkError);
  }
  SUBCASE("duplicate id") {
    CHECK_THROWS_AS(ld::build_qbaf({{"a", 0.1, 1.0}, {"a", 0.2, 1.0}}, {}), ld::DuplicateIdError);
  }
  SUBCASE("tau out of range") {
    CHECK_THROWS_AS(ld::build_qbaf({{"a", 1.5, 1.0}}, {}), ld::RangeError);
    CHECK_THROWS_AS(ld::build_qbaf({{"a", std::nan(""), 1.0}}, {}), ld::RangeError);
  }
  SUBCASE("weight out of range") {
    CHECK_THROWS_AS(ld::build_qbaf({{"a", 0.5, -0.1}}, {}), ld::RangeError);
  }
  SUBCASE("link to an undeclared argument") {
    CHECK_THROWS_AS(ld::build_qbaf({{"a", 0.5, 1.0}}, {{"a", "z"}}), ld::UnknownArgumentError);
  }
}

TEST_CASE("aggregate_energy sums parent strengths") {
  const ld::Qbaf q = football_example();
  ld::PartialStrengths sigma(4);
  sigma[q.index_of("beta")] = -0.3505;
  sigma[q.index_of("delta")] = 0.6;
  CHECK(ld::aggregate_energy(q, q.index_of("alpha"), sigma) == Approx(0.2495).epsilon(1e-12));
  CHECK(ld::aggregate_energy(q, q.index_of("gamma"), sigma) == 0.0);

  sigma[q.index_of("beta")] = 0.4;
  sigma[q.index_of("delta")] = -0.4;
  CHECK(ld::aggregate_energy(q, q.index_of("alpha"), sigma) == 0.0);

  SUBCASE("missing parent") {
    ld::PartialStrengths empty(4);
    CHECK_THROWS_AS(ld::aggregate_energy(q, q.index_of("beta"), empty), ld::MissingParentStrength);
  }
}

TEST_CASE("influence values") {
  CHECK(ld::influence(0.1, -0.5, 1.0) == Approx(-0.3505).epsilon(5e-5));
  CHECK(ld::influence(0.24950199193743372, 0.5, 1.0) == Approx(0.6222).epsilon(5e-5));
  CHECK(ld::influence(0.0, 0.7, 1.0) == 0.7);
  CHECK(std::abs(ld::influence(50.0, -1.0, 1.0) - 1.0) < 1e-6);
  CHECK(ld::influence(0.0, 0.7, 0.5) == Approx(0.35));
}

TEST_CASE("influence agrees with the literal formula") {
  ld::SplitMix64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double e = 8.0 * rng.uniform() - 4.0;
    const double tau = 2.0 * rng.uniform() - 1.0;
    const double w = rng.uniform();
    const double literal = std::tanh(e) + w * tau * (1.0 - std::tanh(std::fabs(e)));
    REQUIRE(std::abs(ld::influence(e, tau, w) - literal) < 1e-15);
  }
}

TEST_CASE("influence is monotone and range-closed") {
  ld::SplitMix64 rng(1234);
  for (int i = 0; i < 10000; ++i) {
    const double tau = 2.0 * rng.uniform() - 1.0;
    const double w = rng.uniform();
    double e1 = 20.0 * rng.uniform() - 10.0;
    double e2 = 20.0 * rng.uniform() - 10.0;
    if (e1 > e2) std::swap(e1, e2);
    const double s1 = ld::influence(e1, tau, w);
    const double s2 = ld::influence(e2, tau, w);
    REQUIRE(s1 <= s2);
    REQUIRE(s1 >= -1.0);
    REQUIRE(s2 <= 1.0);
  }
}

TEST_CASE("adding an attacker weakens, adding a supporter strengthens") {
  ld::SplitMix64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double tau = 1.98 * rng.uniform() - 0.99;
    const double parent = 0.01 + 0.99 * rng.uniform();
    const ld::Qbaf alone = ld::build_qbaf({{"a", tau, 1.0}}, {});
    const ld::Qbaf attacked =
        ld::build_qbaf({{"a", tau, 1.0}, {"b", -parent, 1.0}}, {{"b", "a"}});
    const ld::Qbaf supported =
        ld::build_qbaf({{"a", tau, 1.0}, {"b", parent, 1.0}}, {{"b", "a"}});
    const double base = ld::evaluate(alone).sigma_of(alone, "a");
    REQUIRE(ld::evaluate(attacked).sigma_of(attacked, "a") < base);
    REQUIRE(ld::evaluate(supported).sigma_of(supported, "a") > base);
  }
}

TEST_CASE("evaluate reproduces the worked example") {
  const ld::Qbaf q = football_example();
  const ld::StrengthMap s = ld::evaluate(q);
  CHECK(s.sigma_of(q, "gamma") == 0.1);
  CHECK(s.sigma_of(q, "delta") == 0.6);
  CHECK(s.sigma_of(q, "beta") == Approx(-0.35049800806256626).epsilon(1e-14));
  CHECK(s.sigma_of(q, "alpha") == Approx(0.6222252351813533).epsilon(1e-14));
  CHECK(s.label_of(q, {"gamma", "beta"}) == ld::EdgeLabel::Attack);
  CHECK(s.label_of(q, {"beta", "alpha"}) == ld::EdgeLabel::Attack);
  CHECK(s.label_of(q, {"delta", "alpha"}) == ld::EdgeLabel::Support);
}

TEST_CASE("leaf final strength equals initial strength at weight 1") {
  const ld::Qbaf q = ld::build_qbaf({{"x", -0.8, 1.0}}, {});
  CHECK(ld::evaluate(q).sigma_of(q, "x") == -0.8);
}

TEST_CASE("classify_edges polarity rule") {
  SUBCASE("a strong gamma turns beta positive, and beta then supports alpha") {
    const ld::Qbaf q = ld::build_qbaf(
        {{"alpha", 0.5, 1.0}, {"beta", -0.5, 1.0}, {"gamma", 1.0, 1.0}, {"delta", 0.6, 1.0}},
        {{"gamma", "beta"}, {"beta", "alpha"}, {"delta", "alpha"}});
    const ld::StrengthMap s = ld::evaluate(q);
    REQUIRE(s.sigma_of(q, "beta") > 0.0);
    CHECK(s.label_of(q, {"beta", "alpha"}) == ld::EdgeLabel::Support);
    CHECK(s.label_of(q, {"gamma", "beta"}) == ld::EdgeLabel::Attack);
  }
  SUBCASE("explicit flipped sigma") {
    const ld::Qbaf q = ld::build_qbaf({{"a", 0.5, 1.0}, {"b", -0.5, 1.0}}, {{"b", "a"}});
    const std::vector<double> sigma{0.0, 0.2};  // a, b
    CHECK(ld::classify_edges(q, sigma)[0] == ld::EdgeLabel::Support);
  }
  SUBCASE("zero counts as positive") {
    const ld::Qbaf q = ld::build_qbaf({{"a", 0.3, 1.0}, {"b", 0.0, 1.0}}, {{"b", "a"}});
    const std::vector<double> sigma{0.3, 0.0};
    CHECK(ld::classify_edges(q, sigma)[0] == ld::EdgeLabel::Support);
  }
}

TEST_CASE("evaluate matches the recursive oracle on random graphs") {
  ld::SplitMix64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const RandomGraph g = random_dag(rng, 8);
    std::vector<ld::oracle::Node> nodes;
    std::vector<std::pair<std::string, std::string>> links;
    for (const auto& a : g.arguments) nodes.push_back({a.id, a.tau, a.weight});
    for (const auto& l : g.links) links.emplace_back(l.source, l.target);
    const auto expected = ld::oracle::recursive_strengths(nodes, links);

    const ld::Qbaf q = ld::build_qbaf(g.arguments, g.links);
    const ld::StrengthMap s = ld::evaluate(q);
    for (const auto& a : g.arguments) {
      REQUIRE(std::abs(s.sigma_of(q, a.id) - expected.at(a.id)) <= 1e-12);
      REQUIRE(std::abs(s.sigma_of(q, a.id)) <= 1.0);
    }
  }
}

TEST_CASE("evaluation order does not change the result") {
  ld::SplitMix64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomGraph g = random_dag(rng, 8);
    const ld::Qbaf q = ld::build_qbaf(g.arguments, g.links);
    // Random topological order: Kahn with a random pick among ready nodes.
    std::vector<std::size_t> in_degree(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) in_degree[i] = q.parents(i).size();
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (in_degree[i] == 0) ready.push_back(i);
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
      const std::size_t pick = rng.below(ready.size());
      const std::size_t next = ready[pick];
      ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
      order.push_back(next);
      for (auto c : q.children(next)) {
        if (--in_degree[c] == 0) ready.push_back(c);
      }
    }
    REQUIRE(ld::evaluate_in_order(q, order) == ld::evaluate(q));
  }
}

TEST_CASE("evaluate_in_order rejects a non-topological order") {
  const ld::Qbaf q = football_example();
  std::vector<std::size_t> order = q.topological_order();
  std::reverse(order.begin(), order.end());
  CHECK_THROWS_AS(ld::evaluate_in_order(q, order), ld::Error);
}

TEST_CASE("dump_json layout") {
  const ld::Qbaf q = football_example();
  const std::string text = ld::dump_json(q, ld::evaluate(q));
  CHECK(text.rfind(R"({"arguments":[{"id":"alpha","tau":0.5,"weight":1,"sigma":0.62222523518135)", 0) == 0);
  CHECK(text.find(R"("tau":0.10000000000000001)") != std::string::npos);
  const auto doc = nlohmann::ordered_json::parse(text);
  CHECK(doc["arguments"].size() == 4);
  CHECK(doc["links"][0]["src"] == "gamma");
  CHECK(doc["links"][0]["label"] == "attack");
  CHECK(doc["links"][2]["label"] == "support");
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc["arguments"][0].items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"id", "tau", "weight", "sigma"});
}
