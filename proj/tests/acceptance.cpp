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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "latent_debate/commands.hpp"
#include "latent_debate/debate_graph.hpp"
#include "latent_debate/detector.hpp"
#include "latent_debate/features.hpp"
#include "latent_debate/qbaf.hpp"
#include "latent_debate/rng.hpp"
#include "latent_debate/surrogates.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

namespace ld = latent_debate;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome golden_example() {
  const auto build = [] {
    return ld::build_qbaf({{"alpha", 0.5, 1.0}, {"beta", -0.5, 1.0}, {"gamma", 0.1, 1.0},
                           {"delta", 0.6, 1.0}},
                          {{"gamma", "beta"}, {"beta", "alpha"}, {"delta", "alpha"}});
  };
  const ld::Qbaf q = build();
  // Best of several timed runs of construction + evaluation.
  double best = 1e9;
  ld::StrengthMap s;
  for (int i = 0; i < 50; ++i) {
    const auto start = Clock::now();
    s = ld::evaluate(build());
    best = std::min(best, seconds_since(start));
  }
  const double gamma = s.sigma_of(q, "gamma");
  const double delta = s.sigma_of(q, "delta");
  const double beta = s.sigma_of(q, "beta");
  const double alpha = s.sigma_of(q, "alpha");
  const bool labels = s.label_of(q, {"gamma", "beta"}) == ld::EdgeLabel::Attack &&
                      s.label_of(q, {"beta", "alpha"}) == ld::EdgeLabel::Attack &&
                      s.label_of(q, {"delta", "alpha"}) == ld::EdgeLabel::Support;
  const bool pass = gamma == 0.1 && delta == 0.6 && std::abs(beta - (-0.3505)) <= 0.005 &&
                    std::abs(alpha - 0.6222) <= 0.005 && labels && best < 1e-3;
  return {pass, fmt::format("sigma(beta)={:.4f} sigma(alpha)={:.4f} labels={} runtime={:.1f}us",
                            beta, alpha, labels ? "ok" : "wrong", best * 1e6)};
}

Outcome monotonicity() {
  ld::SplitMix64 rng(1);
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double tau = 2.0 * rng.uniform() - 1.0;
    const double w = rng.uniform();
    double e1 = 20.0 * rng.uniform() - 10.0;
    double e2 = 20.0 * rng.uniform() - 10.0;
    if (e1 > e2) std::swap(e1, e2);
    violations += ld::influence(e1, tau, w) > ld::influence(e2, tau, w);
  }
  double min_slope = 1e300;
  const double h = 1e-3;
  for (int k = 0; k < 100; ++k) {
    const double tau = 2.0 * rng.uniform() - 1.0;
    const double w = rng.uniform();
    for (int j = 0; j < 20000; ++j) {
      const double e = -10.0 + j * h;
      min_slope = std::min(min_slope, (ld::influence(e + h, tau, w) - ld::influence(e, tau, w)) / h);
    }
  }
  return {violations == 0 && min_slope >= -1e-12,
          fmt::format("violations={} / 10000, min finite-difference slope={:.3g}", violations,
                      min_slope)};
}

Outcome range_and_leaf() {
  ld::SplitMix64 rng(2);
  std::size_t out_of_range = 0;
  for (int i = 0; i < 10000; ++i) {
    const double s = ld::influence(40.0 * rng.uniform() - 20.0, 2.0 * rng.uniform() - 1.0, rng.uniform());
    out_of_range += !(s >= -1.0 && s <= 1.0);
  }
  std::size_t leaf_mismatch = 0;
  for (int i = 0; i < 1000; ++i) {
    const double tau = 2.0 * rng.uniform() - 1.0;
    const ld::Qbaf q = ld::build_qbaf({{"leaf", tau, 1.0}}, {});
    leaf_mismatch += ld::evaluate(q).sigma_at(0) != tau;
    leaf_mismatch += ld::influence(0.0, tau, 1.0) != tau;
  }
  return {out_of_range == 0 && leaf_mismatch == 0,
          fmt::format("out of range={} / 10000, leaf mismatches={}", out_of_range, leaf_mismatch)};
}

Outcome oracle_equivalence() {
  ld::SplitMix64 rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[i] = i;
    rng.shuffle(rank);
    std::vector<ld::Argument> args;
    std::vector<ld::Link> links;
    std::vector<ld::oracle::Node> nodes;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      args.push_back({"a" + std::to_string(rank[i]), 2.0 * rng.uniform() - 1.0, rng.uniform()});
      nodes.push_back({args.back().id, args.back().tau, args.back().weight});
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng.below(2)) {
          links.push_back({args[i].id, args[j].id});
          pairs.emplace_back(args[i].id, args[j].id);
        }
      }
    }
    const auto expected = ld::oracle::recursive_strengths(nodes, pairs);
    const ld::Qbaf q = ld::build_qbaf(args, links);
    const ld::StrengthMap s = ld::evaluate(q);
    for (const auto& a : args) worst = std::max(worst, std::abs(s.sigma_of(q, a.id) - expected.at(a.id)));
  }

  std::size_t baseline_mismatch = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto r = ld::synthetic::random_record(rng, 1 + rng.below(6), 1 + rng.below(5));
    double sum = 0.0;
    long pos = 0;
    long neg = 0;
    for (const auto& row : r.p_true) {
      for (double p : row) {
        const double tau = 2.0 * p - 1.0;
        sum += tau;
        (tau >= 0.0 ? pos : neg) += 1;
      }
    }
    const double mean = sum / static_cast<double>(pos + neg);
    const auto avg = ld::average_baseline(r);
    const auto maj = ld::majority_baseline(r);
    baseline_mismatch += avg.score != mean;
    baseline_mismatch += avg.label != (mean >= 0.0 ? ld::TruthLabel::True : ld::TruthLabel::False);
    baseline_mismatch += maj.label != (pos >= neg ? ld::TruthLabel::True : ld::TruthLabel::False);
    baseline_mismatch += maj.score != static_cast<double>(pos - neg) / static_cast<double>(pos + neg);
  }
  return {worst <= 1e-12 && baseline_mismatch == 0,
          fmt::format("graphs: max |sigma - oracle|={:.3g}; grids: baseline mismatches={}", worst,
                      baseline_mismatch)};
}

Outcome feature_correctness() {
  ld::DebateRecord r;
  r.claim = "fixture";
  r.gold_label = ld::TruthLabel::True;
  r.model_prediction = ld::TruthLabel::False;
  r.tokens = {{"a", 1.0}, {"b", 0.5}};
  r.num_layers = 3;
  r.p_true = {{0.75, 0.25}, {0.9, 0.4}, {0.2, 0.6}};
  const auto f = ld::featurize(r, ld::Topology::Simple, true);
  // NumAtk, AvgInit, AvgFin, VarInit, VarFin for lower / middle / upper.
  const std::array<double, ld::kNumFeatures> expected{
      1, 0.0, 0.4138232232875061, 0.25, 0.0074264368445550325,
      2, 0.3, 0.7956167236157091, 0.25, 1.9213111861082514e-05,
      1, -0.2, -0.16497884515378244, 0.16, 0.18924340516373675};
  double worst = 0.0;
  bool counts_exact = true;
  for (std::size_t i = 0; i < ld::kNumFeatures; ++i) {
    if (ld::statistic_of_feature(i) == ld::Statistic::NumAtk) {
      counts_exact = counts_exact && f[i] == expected[i];
    } else {
      worst = std::max(worst, std::abs(f[i] - expected[i]));
    }
  }
  return {counts_exact && worst <= 1e-12 && f.hallucination_label == 1,
          fmt::format("NumAtk exact={}, max |stat - hand value|={:.3g}", counts_exact, worst)};
}

Outcome detector_signal() {
  const auto start = Clock::now();
  const auto vectors = ld::synthetic::injected_signal(2000, 0.1, 42);
  const ld::DetectorConfig config;
  const auto outcome = ld::train_and_evaluate(vectors, config);
  const auto background = ld::sample_background(ld::to_dataset(vectors), config.seed);
  const auto report = ld::importance_report(outcome.model, vectors, background);
  const double elapsed = seconds_since(start);
  const std::size_t top = report.ranking().front();
  const std::size_t signal = ld::feature_index(ld::Region::Middle, ld::Statistic::VarInit);

  // Held-out AUROC of the noise-free signal itself, for context.
  auto [train_set, test_set] = ld::split_dataset(vectors, config);
  std::vector<double> raw;
  std::vector<int> labels;
  for (const auto& v : test_set) {
    raw.push_back(v[signal]);
    labels.push_back(v.hallucination_label);
  }
  const double ceiling = ld::auroc(raw, labels);

  return {outcome.test_auroc >= 0.90 && top == signal && elapsed < 30.0,
          fmt::format("test AUROC={:.4f} (raw signal {:.4f}), top feature={}, runtime={:.2f}s",
                      outcome.test_auroc, ceiling, ld::feature_names()[top], elapsed)};
}

Outcome shapley_axioms() {
  const auto vectors = ld::synthetic::injected_signal(400, 0.1, 7);
  const ld::Dataset data = ld::to_dataset(vectors);
  const auto model = ld::train(data, ld::DetectorConfig{});
  const auto background = ld::sample_background(data, 42);

  std::vector<bool> used(ld::kNumFeatures, false);
  for (const auto& tree : model.trees) {
    for (int f : tree.used_features()) used[static_cast<std::size_t>(f)] = true;
  }
  ld::SplitMix64 rng(11);
  double worst = 0.0;
  std::size_t dummy_nonzero = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(ld::kNumFeatures);
    for (auto& v : x) v = 3.0 * rng.uniform() - 1.0;
    const auto a = ld::shapley(model, x, background);
    double total = 0.0;
    for (double p : a.phi) total += p;
    double mean_margin = 0.0;
    for (const auto& b : background) mean_margin += ld::predict_margin(model, b);
    mean_margin /= static_cast<double>(background.size());
    worst = std::max(worst, std::abs(total - (ld::predict_margin(model, x) - mean_margin)));
    for (std::size_t k = 0; k < ld::kNumFeatures; ++k) dummy_nonzero += !used[k] && a.phi[k] != 0.0;
  }
  const auto unused = static_cast<std::size_t>(std::count(used.begin(), used.end(), false));
  return {worst <= 1e-9 && dummy_nonzero == 0,
          fmt::format("max local-accuracy error={:.3g}, unused features={}, nonzero phi on unused={}",
                      worst, unused, dummy_nonzero)};
}

Outcome auroc_oracle() {
  ld::SplitMix64 rng(13);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.below(100);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    const bool coarse = rng.below(2) == 0;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = coarse ? static_cast<double>(rng.below(5)) : rng.uniform();
      labels[i] = static_cast<int>(rng.below(2));
    }
    labels[0] = 1;
    labels[1] = 0;
    worst = std::max(worst, std::abs(ld::auroc(scores, labels) - ld::oracle::pairwise_auroc(scores, labels)));
  }
  return {worst <= 1e-12, fmt::format("max |auroc - pairwise|={:.3g} over 1000 sets", worst)};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "latent_debate_acceptance";
  fs::create_directories(dir);
  ld::SplitMix64 rng(17);
  std::string corpus;
  for (int i = 0; i < 25; ++i) corpus += ld::to_json(ld::synthetic::random_record(rng, 8, 5)) + "\n";
  ld::write_file(dir / "corpus.jsonl", corpus);
  ld::write_file(dir / "record.json", ld::to_json(ld::synthetic::random_record(rng, 8, 5)));

  bool same = true;
  for (auto topology : {ld::Topology::Simple, ld::Topology::Quadratic}) {
    for (bool weights : {true, false}) {
      const ld::GraphOptions graph{topology, weights};
      same = same && ld::cmd_evaluate(dir / "corpus.jsonl", graph, 42) ==
                         ld::cmd_evaluate(dir / "corpus.jsonl", graph, 42);
      for (auto format : {ld::RenderFormat::Svg, ld::RenderFormat::Ansi}) {
        same = same && ld::cmd_render(dir / "record.json", format, graph) ==
                           ld::cmd_render(dir / "record.json", format, graph);
      }
    }
  }
  return {same, "evaluate and render outputs byte-identical across repeated runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden worked example", golden_example},
      {"monotonicity", monotonicity},
      {"range and leaf invariants", range_and_leaf},
      {"oracle equivalence", oracle_equivalence},
      {"feature correctness", feature_correctness},
      {"detector on injected signal", detector_signal},
      {"shapley axioms", shapley_axioms},
      {"auroc correctness", auroc_oracle},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("threw: {}", e.what())};
    }
    failures += !outcome.pass;
    std::cout << fmt::format("[{}] {}: {}\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail);
  }
  std::cout << "[INFO] full-scale consistency magnitudes on large language models: "
               "not reproduced at desk scale, covered by the property criteria above\n";
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures),
                           criteria.size());
  return failures == 0 ? 0 : 1;
}
