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

// Heatmap of final strengths over the token x layer grid. Blue cells support
// True (sigma >= 0), red cells attack it; opacity is |sigma|. Layer 1 is the
// bottom row.

#include <string>
#include <string_view>

#include "latent_debate/debate_graph.hpp"
#include "latent_debate/qbaf.hpp"

namespace latent_debate {

enum class RenderFormat { Ansi, Svg };

/// "ansi" or "svg"; throws Error otherwise.
RenderFormat parse_render_format(std::string_view name);

struct Rgb {
  int r;
  int g;
  int b;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kSupportColor{33, 102, 172};
inline constexpr Rgb kAttackColor{178, 24, 43};

/// Opacity in [0, 1] for a final strength, linear in |sigma|.
double cell_intensity(double sigma);
Rgb cell_color(double sigma);
/// cell_color(sigma) composited over white at cell_intensity(sigma).
Rgb blend_on_white(double sigma);

std::string render_svg(const DebateRecord& record, const DebateGrid& grid,
                       const StrengthMap& strengths);
std::string render_ansi(const DebateRecord& record, const DebateGrid& grid,
                        const StrengthMap& strengths);

}  // namespace latent_debate
