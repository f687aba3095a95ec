#pragma once

#include <cstdint>
#include <vector>

#include "latentscope/dataset.hpp"
#include "latentscope/heatmap.hpp"
#include "latentscope/mlp.hpp"

namespace latentscope {

/// Tanh MLP whose state s depends only on the features in subsets[s] — the
/// Jacobian is exactly zero outside each block, so heat-map mass landing
/// in-subset is verifiable ground truth.
struct BlockModelSpec {
  int D = 0;
  int H = 0;
  std::vector<std::vector<int>> subsets;
  MlpSpec mlp;
};

/// In-block first-layer weights get magnitude [0.5, 1.5] with random signs;
/// the second layer is diagonal. bias_center shifts each hidden unit so inputs
/// near center*1 land in the responsive part of tanh instead of its flat tails.
BlockModelSpec make_block_model(int D, int H, const std::vector<std::vector<int>>& subsets,
                                std::uint64_t seed, double bias_center = 0.0);

/// Sparse sensor-like integer counts: per (sample, feature) a base level in
/// 1..100, active steps (always the first, then with probability 3/4) read
/// base plus jitter, idle steps read 0. Labels split a hidden linear score of
/// the per-feature totals at its median, so both classes occur.
Dataset make_dataset(int n, int T, int d_raw, std::uint64_t seed);

/// Lift raw-feature subsets onto the augmented layout: every derived column
/// (ctime/cmax/csum) joins the subset of its raw feature.
std::vector<std::vector<int>> expand_subsets(const std::vector<std::vector<int>>& raw_subsets,
                                             int d_raw, int kinds = 4);

/// Fraction of each heat-map row's count mass lying inside the row's true raw
/// subset; augmented columns count toward the raw feature they derive from
/// (column j maps to raw feature j mod d_raw). Zero-mass rows score 0.
std::vector<double> recovery_score(const HeatMap& M,
                                   const std::vector<std::vector<int>>& raw_subsets,
                                   int d_raw);

}  // namespace latentscope
