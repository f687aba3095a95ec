#include "latentscope/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "latentscope/errors.hpp"
#include "latentscope/rng.hpp"

namespace latentscope {

void ReadoutSpec::validate() const {
  if (weights.empty()) throw InputError("readout: empty weight vector");
  for (double w : weights)
    if (!std::isfinite(w)) throw InputError("readout: non-finite weight");
  if (!std::isfinite(bias)) throw InputError("readout: non-finite bias");
}

double readout_output(const ReadoutSpec& readout, std::span<const double> z) {
  if (z.size() != readout.weights.size())
    throw InputError("readout: got " + std::to_string(z.size()) + " latents, expected " +
                     std::to_string(readout.weights.size()));
  double out = readout.bias;
  for (size_t i = 0; i < z.size(); ++i) out += readout.weights[i] * z[i];
  return out;
}

std::vector<double> linear_readout_attribution(const ReadoutSpec& readout,
                                               std::span<const double> z,
                                               std::span<const double> z_ref) {
  if (z.size() != readout.weights.size() || z_ref.size() != readout.weights.size())
    throw InputError("readout attribution: latent length mismatch");
  std::vector<double> out(z.size());
  for (size_t i = 0; i < z.size(); ++i) out[i] = readout.weights[i] * (z[i] - z_ref[i]);
  return out;
}

std::vector<double> permutation_importance(
    const std::function<double(std::span<const double>)>& output_fn, const Matrix& Z,
    int n_permutations, std::uint64_t seed, int workers) {
  const int N = Z.rows;
  const int H = Z.cols;
  if (N < 2) throw InputError("permutation_importance: need a batch of at least 2");
  if (n_permutations < 1)
    throw InputError("permutation_importance: n_permutations must be >= 1");

  std::vector<double> base(N);
  for (int i = 0; i < N; ++i) base[i] = output_fn(Z.row_span(i));

  // scores[s][q] filled independently per (column, round) with its own derived
  // stream, then reduced in fixed order — worker count cannot change a byte.
  std::vector<std::vector<double>> scores(H, std::vector<double>(n_permutations, 0.0));
  auto run_column = [&](int s) {
    std::vector<int> perm(N);
    std::vector<double> modified(H);
    for (int q = 0; q < n_permutations; ++q) {
      SplitMix64 rng(SplitMix64::derive(seed, static_cast<std::uint64_t>(s) *
                                                  static_cast<std::uint64_t>(n_permutations) +
                                              static_cast<std::uint64_t>(q)));
      std::iota(perm.begin(), perm.end(), 0);
      fisher_yates_shuffle(perm, rng);
      double total = 0.0;
      for (int i = 0; i < N; ++i) {
        std::span<const double> row = Z.row_span(i);
        std::copy(row.begin(), row.end(), modified.begin());
        modified[s] = Z.at(perm[i], s);
        total += std::abs(output_fn(modified) - base[i]);
      }
      scores[s][q] = total / N;
    }
  };
  const int W = std::clamp(workers, 1, H);
  if (W == 1) {
    for (int s = 0; s < H; ++s) run_column(s);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(W);
    for (int w = 0; w < W; ++w)
      pool.emplace_back([&, w] {
        for (int s = w; s < H; s += W) run_column(s);
      });
    for (std::thread& t : pool) t.join();
  }

  std::vector<double> out(H, 0.0);
  for (int s = 0; s < H; ++s) {
    for (int q = 0; q < n_permutations; ++q) out[s] += scores[s][q];
    out[s] /= n_permutations;
  }
  return out;
}

std::vector<RankedLatent> rank_latents(const ReadoutSpec& readout, const Matrix& Z,
                                       int step_count) {
  readout.validate();
  const int H = Z.cols;
  if (static_cast<int>(readout.weights.size()) != H)
    throw InputError("rank_latents: readout covers " +
                     std::to_string(readout.weights.size()) + " latent rows, batch has " +
                     std::to_string(H));
  if (Z.rows == 0) throw InputError("rank_latents: empty latent batch");
  std::vector<double> mean(H, 0.0);
  for (int i = 0; i < Z.rows; ++i)
    for (int c = 0; c < H; ++c) mean[c] += Z.at(i, c);
  for (int c = 0; c < H; ++c) mean[c] /= Z.rows;

  std::vector<RankedLatent> out(H);
  for (int c = 0; c < H; ++c) {
    double score = 0.0;
    for (int i = 0; i < Z.rows; ++i)
      score += std::abs(readout.weights[c] * (Z.at(i, c) - mean[c]));
    score /= Z.rows;
    const double w = readout.weights[c];
    out[c] = {c, c / step_count, c % step_count, score, w > 0.0 ? 1 : (w < 0.0 ? -1 : 0)};
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedLatent& a, const RankedLatent& b) {
    return std::abs(a.score) > std::abs(b.score);
  });
  return out;
}

namespace {

// Heat-map row columns ordered by count descending, ties by ascending column.
std::vector<int> columns_by_count(const CountMatrix& counts, int row, int take) {
  std::vector<int> idx(counts.cols);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return counts.at(row, a) > counts.at(row, b); });
  idx.resize(take);
  return idx;
}

}  // namespace

ExplanationReport explanation_chain(const LatentModel& model, const ReadoutSpec& readout,
                                    const Dataset& data,
                                    const std::vector<TimeSeriesSample>& baselines,
                                    const SelectionParams& params, int top_n,
                                    std::uint64_t seed, int workers) {
  readout.validate();
  const int H_total = model.latent_row_count();
  if (static_cast<int>(readout.weights.size()) != H_total)
    throw InputError("explanation_chain: readout covers " +
                     std::to_string(readout.weights.size()) +
                     " latent rows, model produces " + std::to_string(H_total));
  if (top_n < 0) throw InputError("explanation_chain: top_n must be >= 0");

  Matrix Z(static_cast<int>(data.samples.size()), H_total);
  for (size_t i = 0; i < data.samples.size(); ++i) {
    std::vector<double> z = model.latents(data.samples[i]);
    std::copy(z.begin(), z.end(), Z.row(static_cast<int>(i)));
  }

  ExplanationReport report;
  report.ranking = rank_latents(readout, Z, model.step_count());

  // The chain needs every latent row available for slicing, so the row cap is
  // ignored here.
  SelectionParams p = params;
  p.h = 0;
  report.maps = generate_heatmap_pair(data, model, baselines, p, seed, workers);

  const int D = model.feature_dim();
  const int n = std::min(top_n, H_total);
  report.entries.reserve(n);
  for (int e = 0; e < n; ++e) {
    ExplanationEntry entry;
    entry.latent = report.ranking[e];
    const int r = entry.latent.row;
    const int take = std::min(report.maps.pos.params.l, D);
    entry.top_pos_features = columns_by_count(report.maps.pos.counts, r, take);
    entry.top_neg_features = columns_by_count(report.maps.neg.counts, r, take);
    std::vector<int> lead = columns_by_count(report.maps.pos.counts, r, std::min(2, D));
    entry.feature_a = lead[0];
    entry.feature_b = lead.size() > 1 ? lead[1] : lead[0];
    entry.scatter.reserve(data.samples.size());
    for (size_t i = 0; i < data.samples.size(); ++i) {
      const TimeSeriesSample& s = data.samples[i];
      entry.scatter.push_back({s.id, s.label, s.values.at(entry.latent.time_index, entry.feature_a),
                               s.values.at(entry.latent.time_index, entry.feature_b),
                               Z.at(static_cast<int>(i), r)});
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace latentscope
