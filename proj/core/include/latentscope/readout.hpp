#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latentscope/dataset.hpp"
#include "latentscope/heatmap.hpp"
#include "latentscope/latent_model.hpp"
#include "latentscope/matrix.hpp"

namespace latentscope {

/// Linear head over the flattened latent rows: output = w . z + b.
struct ReadoutSpec {
  std::vector<double> weights;
  double bias = 0.0;

  void validate() const;
};

double readout_output(const ReadoutSpec& readout, std::span<const double> z);

/// Exact per-row contribution of moving the latents from z_ref to z:
/// contribution[r] = w[r] * (z[r] - z_ref[r]); the contributions sum to the
/// output difference exactly (the head is linear).
std::vector<double> linear_readout_attribution(const ReadoutSpec& readout,
                                               std::span<const double> z,
                                               std::span<const double> z_ref);

/// Mean absolute output change when one latent column of the batch is permuted
/// (fresh seeded permutation per (column, round)). Fallback ranking signal for
/// heads that are not linear.
std::vector<double> permutation_importance(
    const std::function<double(std::span<const double>)>& output_fn, const Matrix& Z,
    int n_permutations, std::uint64_t seed, int workers = 1);

struct RankedLatent {
  int row = 0;         // flattened index, state * T + time
  int state = 0;
  int time_index = 0;
  double score = 0.0;  // mean |w[row] * (z - batch mean)| over the batch
  int sign = 0;        // sign of the readout weight
};

/// Latent rows ordered by |score| descending, ties by ascending row.
std::vector<RankedLatent> rank_latents(const ReadoutSpec& readout, const Matrix& Z,
                                       int step_count);

struct ScatterPoint {
  std::string sample_id;
  int label = 0;
  double feature_a = 0.0;
  double feature_b = 0.0;
  double latent = 0.0;
};

/// One link of the output -> latent -> features chain: a top-ranked latent row,
/// the features that most often drive it in each direction, and a scatter of
/// the two leading features against the row's latent value over all samples.
struct ExplanationEntry {
  RankedLatent latent;
  std::vector<int> top_pos_features;  // positive-map columns, count desc
  std::vector<int> top_neg_features;
  int feature_a = -1;                 // top two of the positive map
  int feature_b = -1;
  std::vector<ScatterPoint> scatter;
};

struct ExplanationReport {
  std::vector<RankedLatent> ranking;
  HeatMapPair maps;
  std::vector<ExplanationEntry> entries;
};

ExplanationReport explanation_chain(const LatentModel& model, const ReadoutSpec& readout,
                                    const Dataset& data,
                                    const std::vector<TimeSeriesSample>& baselines,
                                    const SelectionParams& params, int top_n,
                                    std::uint64_t seed, int workers = 1);

}  // namespace latentscope
