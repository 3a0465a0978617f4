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

#include "latent_debate/render.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "latent_debate/errors.hpp"

namespace latent_debate {

RenderFormat parse_render_format(std::string_view name) {
  if (name == "ansi") return RenderFormat::Ansi;
  if (name == "svg") return RenderFormat::Svg;
  throw Error(fmt::format("unknown render format '{}' (expected ansi or svg)", name));
}

double cell_intensity(double sigma) { return std::clamp(std::abs(sigma), 0.0, 1.0); }

Rgb cell_color(double sigma) { return is_positive(sigma) ? kSupportColor : kAttackColor; }

Rgb blend_on_white(double sigma) {
  const double a = cell_intensity(sigma);
  const Rgb c = cell_color(sigma);
  auto mix = [a](int channel) {
    return static_cast<int>(std::lround(255.0 + (channel - 255.0) * a));
  };
  return {mix(c.r), mix(c.g), mix(c.b)};
}

namespace {

constexpr int kCellWidth = 48;
constexpr int kCellHeight = 24;
constexpr int kLeftMargin = 48;
constexpr int kTopMargin = 32;
constexpr int kBottomMargin = 72;

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const DebateRecord& record, const DebateGrid& grid,
                       const StrengthMap& strengths) {
  const std::size_t layers = grid.num_layers();
  const std::size_t tokens = grid.num_tokens();
  const int width = kLeftMargin + static_cast<int>(tokens) * kCellWidth + 8;
  const int height = kTopMargin + static_cast<int>(layers) * kCellHeight + kBottomMargin;

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"monospace\" font-size=\"10\">\n",
      width, height);
  out += fmt::format("<title>{}</title>\n", xml_escape(record.claim));
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width,
                     height);
  out += fmt::format("<text x=\"{}\" y=\"16\">{} (model: {}, gold: {})</text>\n", kLeftMargin,
                     xml_escape(record.claim), to_string(record.model_prediction),
                     to_string(record.gold_label));

  for (std::size_t l = layers; l >= 1; --l) {
    const int y = kTopMargin + static_cast<int>(layers - l) * kCellHeight;
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">L{}</text>\n",
                       kLeftMargin - 6, y + kCellHeight / 2 + 4, l);
    for (std::size_t n = 1; n <= tokens; ++n) {
      const double sigma = strengths.sigma_at(grid.argument_at(l, n));
      const Rgb c = cell_color(sigma);
      const int x = kLeftMargin + static_cast<int>(n - 1) * kCellWidth;
      out += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({},{},{})\" "
          "fill-opacity=\"{:.4f}\" stroke=\"#cccccc\" stroke-width=\"0.5\">"
          "<title>{} sigma={:.4f}</title></rect>\n",
          x, y, kCellWidth, kCellHeight, c.r, c.g, c.b, cell_intensity(sigma),
          cell_id(l, n), sigma);
    }
  }

  const int label_y = kTopMargin + static_cast<int>(layers) * kCellHeight + 10;
  for (std::size_t n = 1; n <= tokens; ++n) {
    const int x = kLeftMargin + static_cast<int>(n - 1) * kCellWidth + kCellWidth / 2;
    out += fmt::format(
        "<text x=\"{0}\" y=\"{1}\" text-anchor=\"end\" transform=\"rotate(-45 {0} {1})\">{2}</text>\n",
        x, label_y, xml_escape(record.tokens[n - 1].text));
  }
  out += "</svg>\n";
  return out;
}

std::string render_ansi(const DebateRecord& record, const DebateGrid& grid,
                        const StrengthMap& strengths) {
  std::string out = fmt::format("{} (model: {}, gold: {})\n", record.claim,
                                to_string(record.model_prediction), to_string(record.gold_label));
  for (std::size_t l = grid.num_layers(); l >= 1; --l) {
    out += fmt::format("L{:<3}", l);
    for (std::size_t n = 1; n <= grid.num_tokens(); ++n) {
      const double sigma = strengths.sigma_at(grid.argument_at(l, n));
      const Rgb bg = blend_on_white(sigma);
      out += fmt::format("\x1b[48;2;{};{};{}m\x1b[38;2;0;0;0m{:+.2f} \x1b[0m", bg.r, bg.g, bg.b,
                         sigma);
    }
    out += '\n';
  }
  out += "    ";
  for (std::size_t n = 1; n <= grid.num_tokens(); ++n) {
    std::string text = record.tokens[n - 1].text.substr(0, 5);
    out += fmt::format("{:<6}", text);
  }
  out += '\n';
  return out;
}

}  // namespace latent_debate
