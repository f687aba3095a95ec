#include "latentscope/svg.hpp"

#include <algorithm>
#include <cstdio>

#include "latentscope/errors.hpp"

namespace latentscope {

namespace {

// lightest -> darkest single-hue (blue) ramp
constexpr int kLight[3] = {0xf7, 0xfb, 0xff};
constexpr int kDark[3] = {0x08, 0x30, 0x6b};

std::string cell_color(std::int64_t count, std::int64_t max_count) {
  const double t = max_count == 0 ? 0.0 : static_cast<double>(count) / max_count;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(kLight[0] + t * (kDark[0] - kLight[0]) + 0.5),
                static_cast<int>(kLight[1] + t * (kDark[1] - kLight[1]) + 0.5),
                static_cast<int>(kLight[2] + t * (kDark[2] - kLight[2]) + 0.5));
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_heatmap_svg(const HeatMap& m) {
  const int rows = m.counts.rows;
  const int cols = m.counts.cols;
  if (rows == 0 || cols == 0) throw InputError("render: empty heat map");

  const int cell_w = 18, cell_h = 14;
  size_t label_len = 0;
  for (const std::string& l : m.row_labels) label_len = std::max(label_len, l.size());
  const int left = 16 + static_cast<int>(label_len) * 7;
  size_t col_len = 0;
  for (const std::string& l : m.col_labels) col_len = std::max(col_len, l.size());
  const int top = 20 + static_cast<int>(col_len) * 5;
  const int legend_h = 40;
  const int width = left + cols * cell_w + 16;
  const int height = top + rows * cell_h + legend_h;

  std::int64_t max_count = 0;
  for (std::int64_t v : m.counts.data) max_count = std::max(max_count, v);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  svg += "<rect width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" fill=\"#ffffff\"/>\n";
  svg += "<g font-family=\"monospace\" font-size=\"10\" fill=\"#000000\">\n";

  for (int c = 0; c < cols; ++c) {
    const int x = left + c * cell_w + cell_w / 2;
    svg += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(top - 6) +
           "\" text-anchor=\"start\" transform=\"rotate(-60 " + std::to_string(x) + " " +
           std::to_string(top - 6) + ")\">" + escape_xml(m.col_labels[c]) + "</text>\n";
  }
  for (int r = 0; r < rows; ++r) {
    svg += "<text x=\"" + std::to_string(left - 6) + "\" y=\"" +
           std::to_string(top + r * cell_h + cell_h - 4) +
           "\" text-anchor=\"end\">" + escape_xml(m.row_labels[r]) + "</text>\n";
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      svg += "<rect x=\"" + std::to_string(left + c * cell_w) + "\" y=\"" +
             std::to_string(top + r * cell_h) + "\" width=\"" + std::to_string(cell_w) +
             "\" height=\"" + std::to_string(cell_h) + "\" fill=\"" +
             cell_color(m.counts.at(r, c), max_count) +
             "\" stroke=\"#d0d0d0\" stroke-width=\"0.5\"/>\n";
    }
  }

  std::string legend = "direction=";
  legend += direction_name(m.direction);
  legend += " m=" + std::to_string(m.params.m);
  legend += " k=" + std::to_string(m.params.k);
  legend += " l=" + std::to_string(m.params.l);
  legend += " n_baselines=" + std::to_string(m.n_baselines);
  legend += " seed=" + std::to_string(m.seed);
  legend += " max=" + std::to_string(max_count);
  if (m.dropped > 0) legend += " dropped=" + std::to_string(m.dropped);
  svg += "<text x=\"" + std::to_string(left) + "\" y=\"" +
         std::to_string(top + rows * cell_h + 24) + "\">" + escape_xml(legend) +
         "</text>\n";
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace latentscope
