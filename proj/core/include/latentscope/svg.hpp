#pragma once

#include <string>

#include "latentscope/heatmap.hpp"

namespace latentscope {

/// Fig-style rendering of a heat map: one rectangle per cell on a single-hue
/// scale (lightest = 0, darkest = max count), latent labels on the left,
/// feature names on top, run parameters as a legend line. Pure function of
/// the map — identical input gives identical bytes.
std::string render_heatmap_svg(const HeatMap& m);

}  // namespace latentscope
