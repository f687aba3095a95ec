#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latentscope/dataset.hpp"
#include "latentscope/matrix.hpp"

namespace latentscope {

/// Replace NaN cells with 0 in place; returns a row-major mask of which cells
/// were missing (1 = filled).
std::vector<std::uint8_t> fill_missing(Matrix& values);

struct MissingReport {
  std::int64_t filled = 0;
  std::vector<std::int64_t> per_sample;
};

MissingReport fill_missing(Dataset& data);

/// Column names for the augmented layout: all raw names, then the same names
/// with _ctime, _cmax, _csum suffixes, one block per kind.
std::vector<std::string> augmented_names(const std::vector<std::string>& raw);

/// T x D -> T x 4D. Per feature f: ctime[n] counts steps t <= n with f[t] != 0,
/// cmax[n] = max_{t<=n} f[t], csum[n] = sum_{t<=n} f[t]. Expects missing values
/// already filled. The first D columns are the input, unchanged.
Matrix augment(const Matrix& raw);

Dataset augment(const Dataset& data);

/// Per-feature min/max fitted on a training split.
struct FeatureStats {
  std::vector<std::string> names;
  std::vector<double> min;
  std::vector<double> max;
};

FeatureStats fit_minmax(const Dataset& train);

/// x -> (x - min)/(max - min) + 1, mapping the fitted range onto [1,2];
/// constant features map to 1.
void apply_minmax_shift(Matrix& values, const FeatureStats& stats);

void apply_minmax_shift(Dataset& data, const FeatureStats& stats);

}  // namespace latentscope
