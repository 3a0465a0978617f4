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

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "latent_debate/detector.hpp"
#include "latent_debate/errors.hpp"

namespace latent_debate {

double auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw LengthMismatch(fmt::format("{} scores vs {} labels", scores.size(), labels.size()));
  }
  const std::size_t n = scores.size();
  std::size_t positives = 0;
  for (int y : labels) positives += y == 1;
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw SingleClassError("AUROC needs both classes");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of 1-based positive ranks, tied blocks share their mean rank. Ranks
  // are kept doubled so every partial sum stays an exact integer.
  double doubled_rank_sum = 0.0;
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && scores[order[end]] == scores[order[start]]) ++end;
    const double doubled_rank = static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) {
      if (labels[order[k]] == 1) doubled_rank_sum += doubled_rank;
    }
    start = end;
  }
  const double p = static_cast<double>(positives);
  const double u = doubled_rank_sum / 2.0 - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

}  // namespace latent_debate
