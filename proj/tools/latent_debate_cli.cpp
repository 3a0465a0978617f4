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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "latent_debate/commands.hpp"
#include "latent_debate/errors.hpp"

namespace ld = latent_debate;

namespace {

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    ld::write_file(out_path, content);
  }
}

struct GraphFlags {
  std::string topology = "simple";
  bool no_token_weight = false;

  void attach(CLI::App* app) {
    app->add_option("--topology", topology, "Grid topology")
        ->check(CLI::IsMember({"simple", "quadratic"}))
        ->capture_default_str();
    app->add_flag("--no-token-weight", no_token_weight, "Use weight 1 for every token");
  }
  ld::GraphOptions options() const {
    return {ld::parse_topology(topology), !no_token_weight};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent debate: argumentation surrogates and hallucination detection"};
  app.require_subcommand(1);

  std::string input;
  std::string model_path;
  std::string out_path;
  std::string config_path;
  std::string format = "svg";
  std::uint64_t seed = 42;
  GraphFlags graph;

  auto* evaluate = app.add_subcommand("evaluate", "Surrogate verdicts and consistency for a corpus");
  evaluate->add_option("corpus", input, "JSON-lines corpus of debate records")->required();
  evaluate->add_option("--seed", seed, "Seed for the Random baseline")->capture_default_str();
  evaluate->add_option("--out", out_path, "Output file (default: stdout)");
  graph.attach(evaluate);

  auto* render = app.add_subcommand("render", "Draw the final-strength grid of one record");
  render->add_option("record", input, "Single debate record (JSON)")->required();
  render->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"ansi", "svg"}))
      ->capture_default_str();
  render->add_option("--out", out_path, "Output file (default: stdout)");
  graph.attach(render);

  auto* features = app.add_subcommand("features", "Region feature table for a corpus");
  features->add_option("corpus", input, "JSON-lines corpus of debate records")->required();
  features->add_option("--out", out_path, "Output CSV (default: stdout)");
  graph.attach(features);

  auto* train = app.add_subcommand("train", "Train the detector on a feature table");
  train->add_option("features", input, "Feature CSV")->required();
  train->add_option("--config", config_path, "Detector config JSON");
  auto* seed_opt = train->add_option("--seed", seed, "Overrides the config seed");
  train->add_option("--out", out_path, "Model JSON (default: stdout)");

  auto* explain = app.add_subcommand("explain", "Mean |SHAP| importance per feature and region");
  explain->add_option("features", input, "Feature CSV")->required();
  explain->add_option("model", model_path, "Model JSON")->required();
  explain->add_option("--out", out_path, "Output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (evaluate->parsed()) {
      emit(ld::cmd_evaluate(input, graph.options(), seed), out_path);
    } else if (render->parsed()) {
      emit(ld::cmd_render(input, ld::parse_render_format(format), graph.options()), out_path);
    } else if (features->parsed()) {
      emit(ld::cmd_features(input, graph.options()), out_path);
    } else if (train->parsed()) {
      std::optional<std::string> config_file;
      if (!config_path.empty()) config_file = config_path;
      std::optional<std::uint64_t> seed_override;
      if (seed_opt->count() > 0) seed_override = seed;
      std::string summary;
      const auto config = ld::load_config(config_file, seed_override);
      emit(ld::cmd_train(input, config, &summary), out_path);
      std::cerr << summary << '\n';
    } else if (explain->parsed()) {
      std::cerr << "attributions are on the raw margin (log-odds) scale\n";
      emit(ld::cmd_explain(input, model_path), out_path);
    }
  } catch (const ld::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
