#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latentscope/dataset.hpp"
#include "latentscope/latent_model.hpp"
#include "latentscope/matrix.hpp"

namespace latentscope {

enum class Direction { kPositive, kNegative };

const char* direction_name(Direction d);
Direction direction_from_name(const std::string& name);

/// Knobs for the contrastive selection loop. h = 0 means "all latent rows".
struct SelectionParams {
  int m = 64;            // balanced training subset size
  int k = 5;             // dissimilar samples kept per baseline
  int l = 3;             // top features kept per latent row
  int h = 0;             // latent rows processed (first h)
  int n_quad = 64;       // quadrature nodes for attribution
  double epsilon = 1e-12;

  bool operator==(const SelectionParams&) const = default;
};

/// Count matrix over (latent row, feature): how often a feature ranked among
/// the top-l impactful features of that row, accumulated over baselines and
/// their k dissimilar partners. One map per impact direction.
struct HeatMap {
  CountMatrix counts;  // h x D
  Direction direction = Direction::kPositive;
  SelectionParams params;
  int n_baselines = 0;
  std::uint64_t seed = 0;
  std::int64_t dropped = 0;  // increments lost to zero-shift rows
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

struct HeatMapPair {
  HeatMap pos;
  HeatMap neg;
};

/// Cosine similarity; a zero vector on either side gives 0.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Indices of a class-balanced subset of size m (floor(m/2) from class 0,
/// the rest from class 1), drawn without replacement, returned ascending.
std::vector<int> balanced_subset(const std::vector<int>& labels, int m,
                                 std::uint64_t seed);

/// Indices of the k rows of Zc least cosine-similar to z_hat, in ascending
/// similarity order; ties broken by ascending row index.
std::vector<int> top_dissimilar_samples(const Matrix& Zc,
                                        std::span<const double> z_hat, int k);

/// features[ki][hi] = the l feature indices with most positive-direction
/// (descending impact) or negative-direction (ascending impact) pull on latent
/// row hi, for the ki-th selected sample. Zero-shift rows come back flagged
/// with the l lowest indices as placeholders.
struct TopFeatureResult {
  std::vector<std::vector<std::vector<int>>> features;  // k x h x l
  std::vector<std::vector<std::uint8_t>> guarded;       // k x h
};

TopFeatureResult top_impactful_features(Direction d, const LatentModel& model,
                                        const TimeSeriesSample& x_hat,
                                        const std::vector<const TimeSeriesSample*>& selected,
                                        int l, int n_quad, double epsilon);

/// Both directions in one pass over the baselines: the attribution work per
/// (baseline, sample) pair is shared, only the final per-row sort differs.
HeatMapPair generate_heatmap_pair(const Dataset& data, const LatentModel& model,
                                  const std::vector<TimeSeriesSample>& baselines,
                                  const SelectionParams& params, std::uint64_t seed,
                                  int workers = 1);

HeatMap generate_heatmap(Direction d, const Dataset& data, const LatentModel& model,
                         const std::vector<TimeSeriesSample>& baselines,
                         const SelectionParams& params, std::uint64_t seed,
                         int workers = 1);

/// Entrywise sum of two partial maps with identical metadata.
HeatMap merge_heatmaps(const HeatMap& a, const HeatMap& b);

/// Row label for flattened latent row r: "z{state}(t{step})".
std::string latent_row_label(int row, int step_count);

}  // namespace latentscope
