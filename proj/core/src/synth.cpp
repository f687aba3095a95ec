#include "latentscope/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "latentscope/errors.hpp"
#include "latentscope/rng.hpp"

namespace latentscope {

BlockModelSpec make_block_model(int D, int H, const std::vector<std::vector<int>>& subsets,
                                std::uint64_t seed, double bias_center) {
  if (D < 1 || H < 1) throw InputError("make_block_model: D and H must be positive");
  if (static_cast<int>(subsets.size()) != H)
    throw InputError("make_block_model: got " + std::to_string(subsets.size()) +
                     " subsets for H=" + std::to_string(H));
  std::vector<int> owner(D, -1);
  for (int s = 0; s < H; ++s) {
    if (subsets[s].empty())
      throw InputError("make_block_model: subset " + std::to_string(s) + " is empty");
    for (int j : subsets[s]) {
      if (j < 0 || j >= D)
        throw InputError("make_block_model: feature index " + std::to_string(j) +
                         " out of range in subset " + std::to_string(s));
      if (owner[j] != -1)
        throw InputError("make_block_model: feature " + std::to_string(j) +
                         " appears in subsets " + std::to_string(owner[j]) + " and " +
                         std::to_string(s));
      owner[j] = s;
    }
  }

  SplitMix64 rng(seed);
  MlpSpec mlp;
  mlp.layer_dims = {D, H, H};
  mlp.activations = {Activation::kTanh, Activation::kIdentity};
  Matrix w1(H, D);
  std::vector<double> b1(H, 0.0);
  for (int s = 0; s < H; ++s) {
    double wsum = 0.0;
    for (int j : subsets[s]) {
      const double mag = rng.uniform(0.5, 1.5);
      const double w = rng.next() & 1 ? mag : -mag;
      w1.at(s, j) = w;
      wsum += w;
    }
    b1[s] = -bias_center * wsum;
  }
  Matrix w2(H, H);
  for (int s = 0; s < H; ++s) {
    const double mag = rng.uniform(0.5, 1.5);
    w2.at(s, s) = rng.next() & 1 ? mag : -mag;
  }
  mlp.weights = {std::move(w1), std::move(w2)};
  mlp.biases = {std::move(b1), std::vector<double>(H, 0.0)};
  mlp.validate();

  BlockModelSpec spec;
  spec.D = D;
  spec.H = H;
  spec.subsets = subsets;
  spec.mlp = std::move(mlp);
  return spec;
}

Dataset make_dataset(int n, int T, int d_raw, std::uint64_t seed) {
  if (n < 1 || T < 1 || d_raw < 1)
    throw InputError("make_dataset: n, T, D must all be positive");
  Dataset out;
  out.times.resize(T);
  for (int t = 0; t < T; ++t) out.times[t] = static_cast<double>(t);
  out.feature_names.reserve(d_raw);
  for (int f = 0; f < d_raw; ++f) out.feature_names.push_back("f" + std::to_string(f));

  SplitMix64 rng(seed);
  out.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    TimeSeriesSample s;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "s%04d", i);
    s.id = buf;
    s.values = Matrix(T, d_raw);
    for (int f = 0; f < d_raw; ++f) {
      const double base = 1.0 + static_cast<double>(rng.next_below(100));
      for (int t = 0; t < T; ++t) {
        const bool active = t == 0 || rng.next_double() < 0.75;
        s.values.at(t, f) = active ? base + static_cast<double>(rng.next_below(4)) : 0.0;
      }
    }
    out.samples.push_back(std::move(s));
  }

  // hidden linear functional of the per-feature totals, split at its median
  SplitMix64 wrng(SplitMix64::derive(seed, 0x6c6162656cULL));  // "label"
  std::vector<double> w(d_raw);
  for (int f = 0; f < d_raw; ++f) w[f] = wrng.uniform(-1.0, 1.0);
  std::vector<double> score(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int f = 0; f < d_raw; ++f)
      for (int t = 0; t < T; ++t) score[i] += w[f] * out.samples[i].values.at(t, f);
  std::vector<double> sorted = score;
  std::sort(sorted.begin(), sorted.end());
  const double thresh = sorted[n / 2];
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    out.samples[i].label = score[i] >= thresh ? 1 : 0;
    ones += out.samples[i].label;
  }
  if (n >= 2 && (ones == 0 || ones == n)) {
    // all scores tied; fall back to an alternating split
    for (int i = 0; i < n; ++i) out.samples[i].label = i % 2;
  }
  return out;
}

std::vector<std::vector<int>> expand_subsets(const std::vector<std::vector<int>>& raw_subsets,
                                             int d_raw, int kinds) {
  std::vector<std::vector<int>> out(raw_subsets.size());
  for (size_t s = 0; s < raw_subsets.size(); ++s) {
    for (int k = 0; k < kinds; ++k)
      for (int j : raw_subsets[s]) out[s].push_back(k * d_raw + j);
    std::sort(out[s].begin(), out[s].end());
  }
  return out;
}

std::vector<double> recovery_score(const HeatMap& M,
                                   const std::vector<std::vector<int>>& raw_subsets,
                                   int d_raw) {
  const int H = static_cast<int>(raw_subsets.size());
  const int rows = M.counts.rows;
  if (H < 1 || rows % H != 0)
    throw InputError("recovery_score: " + std::to_string(rows) +
                     " heat-map rows do not split over " + std::to_string(H) + " states");
  if (d_raw < 1 || M.counts.cols % d_raw != 0)
    throw InputError("recovery_score: " + std::to_string(M.counts.cols) +
                     " columns do not split over " + std::to_string(d_raw) +
                     " raw features");
  const int T = rows / H;
  std::vector<std::vector<char>> in_subset(H, std::vector<char>(d_raw, 0));
  for (int s = 0; s < H; ++s)
    for (int j : raw_subsets[s]) {
      if (j < 0 || j >= d_raw)
        throw InputError("recovery_score: raw feature index " + std::to_string(j) +
                         " out of range");
      in_subset[s][j] = 1;
    }
  std::vector<double> out(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    const int s = r / T;
    std::int64_t total = 0, inside = 0;
    for (int j = 0; j < M.counts.cols; ++j) {
      const std::int64_t c = M.counts.at(r, j);
      total += c;
      if (in_subset[s][j % d_raw]) inside += c;
    }
    out[r] = total == 0 ? 0.0 : static_cast<double>(inside) / static_cast<double>(total);
  }
  return out;
}

}  // namespace latentscope
