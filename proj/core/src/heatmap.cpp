#include "latentscope/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <utility>

#include "latentscope/attribution.hpp"
#include "latentscope/errors.hpp"
#include "latentscope/rng.hpp"

namespace latentscope {

const char* direction_name(Direction d) {
  return d == Direction::kPositive ? "positive" : "negative";
}

Direction direction_from_name(const std::string& name) {
  if (name == "positive") return Direction::kPositive;
  if (name == "negative") return Direction::kNegative;
  throw InputError("unknown direction '" + name + "', expected positive or negative");
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw InputError("cosine_similarity: length mismatch " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<int> balanced_subset(const std::vector<int>& labels, int m,
                                 std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  if (m <= 0) throw InputError("balanced_subset: m must be positive, got " + std::to_string(m));
  if (m > n)
    throw InputError("balanced_subset: m=" + std::to_string(m) + " exceeds sample count " +
                     std::to_string(n));
  std::vector<int> class0, class1;
  for (int i = 0; i < n; ++i) {
    if (labels[i] == 0)
      class0.push_back(i);
    else if (labels[i] == 1)
      class1.push_back(i);
    else
      throw InputError("balanced_subset: label " + std::to_string(labels[i]) +
                       " at sample " + std::to_string(i) + ", expected 0 or 1");
  }
  const int need0 = m / 2;
  const int need1 = m - need0;
  if (static_cast<int>(class0.size()) < need0)
    throw InputError("balanced_subset: need " + std::to_string(need0) +
                     " class-0 samples, only " + std::to_string(class0.size()) +
                     " available");
  if (static_cast<int>(class1.size()) < need1)
    throw InputError("balanced_subset: need " + std::to_string(need1) +
                     " class-1 samples, only " + std::to_string(class1.size()) +
                     " available");
  SplitMix64 rng(seed);
  fisher_yates_shuffle(class0, rng);
  fisher_yates_shuffle(class1, rng);
  std::vector<int> out(class0.begin(), class0.begin() + need0);
  out.insert(out.end(), class1.begin(), class1.begin() + need1);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> top_dissimilar_samples(const Matrix& Zc, std::span<const double> z_hat,
                                        int k) {
  if (Zc.rows == 0) throw InputError("top_dissimilar_samples: empty latent matrix");
  if (k <= 0 || k > Zc.rows)
    throw InputError("top_dissimilar_samples: k=" + std::to_string(k) +
                     " out of range for " + std::to_string(Zc.rows) + " rows");
  std::vector<double> sims(Zc.rows);
  for (int r = 0; r < Zc.rows; ++r) sims[r] = cosine_similarity(Zc.row_span(r), z_hat);
  std::vector<int> idx(Zc.rows);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return sims[a] < sims[b]; });
  idx.resize(k);
  return idx;
}

namespace {

// Top-l column indices of one impact row, descending for the positive
// direction, ascending for the negative; ties keep ascending column order.
std::vector<int> top_columns(Direction d, std::span<const double> p, int l) {
  std::vector<int> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (d == Direction::kPositive)
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return p[a] > p[b]; });
  else
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return p[a] < p[b]; });
  idx.resize(l);
  return idx;
}

std::vector<int> placeholder_columns(int l) {
  std::vector<int> idx(l);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

}  // namespace

TopFeatureResult top_impactful_features(Direction d, const LatentModel& model,
                                        const TimeSeriesSample& x_hat,
                                        const std::vector<const TimeSeriesSample*>& selected,
                                        int l, int n_quad, double epsilon) {
  const int D = model.feature_dim();
  if (l <= 0 || l > D)
    throw InputError("top_impactful_features: l=" + std::to_string(l) +
                     " out of range for " + std::to_string(D) + " features");
  const int h = model.latent_row_count();
  TopFeatureResult out;
  out.features.resize(selected.size());
  out.guarded.resize(selected.size());
  for (size_t ki = 0; ki < selected.size(); ++ki) {
    PairAttribution pa = model.attribute(*selected[ki], x_hat, n_quad);
    ImpactMatrix im = impact_measure(pa, epsilon);
    out.features[ki].resize(h);
    out.guarded[ki].resize(h);
    for (int r = 0; r < h; ++r) {
      out.guarded[ki][r] = im.guarded[r];
      out.features[ki][r] =
          im.guarded[r] ? placeholder_columns(l) : top_columns(d, im.p.row_span(r), l);
    }
  }
  return out;
}

namespace {

struct PartialCounts {
  CountMatrix pos;
  CountMatrix neg;
  std::int64_t dropped_pos = 0;
  std::int64_t dropped_neg = 0;
};

// One baseline's worth of the selection loop, both directions at once: the
// expensive part (integrated Jacobians per selected sample) is shared and the
// two directions differ only in sort order.
void accumulate_baseline(const TimeSeriesSample& x_hat, const LatentModel& model,
                         const Matrix& Zc,
                         const std::vector<const TimeSeriesSample*>& subset,
                         const SelectionParams& p, PartialCounts& acc) {
  std::vector<double> z_hat = model.latents(x_hat);
  std::vector<int> ids = top_dissimilar_samples(Zc, z_hat, p.k);
  for (int id : ids) {
    PairAttribution pa = model.attribute(*subset[id], x_hat, p.n_quad);
    ImpactMatrix im = impact_measure(pa, p.epsilon);
    for (int r = 0; r < p.h; ++r) {
      if (im.guarded[r]) {
        acc.dropped_pos += p.l;
        acc.dropped_neg += p.l;
        continue;
      }
      for (int j : top_columns(Direction::kPositive, im.p.row_span(r), p.l))
        ++acc.pos.at(r, j);
      for (int j : top_columns(Direction::kNegative, im.p.row_span(r), p.l))
        ++acc.neg.at(r, j);
    }
  }
}

}  // namespace

HeatMapPair generate_heatmap_pair(const Dataset& data, const LatentModel& model,
                                  const std::vector<TimeSeriesSample>& baselines,
                                  const SelectionParams& params, std::uint64_t seed,
                                  int workers) {
  if (baselines.empty()) throw InputError("generate_heatmap: no baseline samples");
  const int D = model.feature_dim();
  const int H_total = model.latent_row_count();
  SelectionParams p = params;
  if (p.h == 0) p.h = H_total;
  if (p.h < 1 || p.h > H_total)
    throw InputError("generate_heatmap: h=" + std::to_string(p.h) +
                     " out of range for " + std::to_string(H_total) + " latent rows");
  if (p.k < 1 || p.k > p.m)
    throw InputError("generate_heatmap: need 1 <= k <= m, got k=" + std::to_string(p.k) +
                     ", m=" + std::to_string(p.m));
  if (p.l < 1 || p.l > D)
    throw InputError("generate_heatmap: need 1 <= l <= D, got l=" + std::to_string(p.l) +
                     ", D=" + std::to_string(D));
  if (p.n_quad < 1)
    throw InputError("generate_heatmap: n_quad must be >= 1, got " +
                     std::to_string(p.n_quad));
  if (!(p.epsilon > 0.0)) throw InputError("generate_heatmap: epsilon must be positive");
  if (static_cast<int>(data.feature_names.size()) != D)
    throw InputError("generate_heatmap: dataset has " +
                     std::to_string(data.feature_names.size()) +
                     " features, model expects " + std::to_string(D));

  std::vector<int> subset_ids = balanced_subset(data.labels(), p.m, seed);
  std::vector<const TimeSeriesSample*> subset;
  subset.reserve(subset_ids.size());
  for (int id : subset_ids) subset.push_back(&data.samples[id]);

  Matrix Zc(static_cast<int>(subset.size()), H_total);
  for (size_t i = 0; i < subset.size(); ++i) {
    std::vector<double> z = model.latents(*subset[i]);
    std::copy(z.begin(), z.end(), Zc.row(static_cast<int>(i)));
  }

  const int B = static_cast<int>(baselines.size());
  int W = std::clamp(workers, 1, B);
  std::vector<PartialCounts> partials(W);
  for (PartialCounts& pc : partials) {
    pc.pos = CountMatrix(p.h, D);
    pc.neg = CountMatrix(p.h, D);
  }
  auto run_chunk = [&](int w) {
    const int b0 = w * B / W;
    const int b1 = (w + 1) * B / W;
    for (int b = b0; b < b1; ++b)
      accumulate_baseline(baselines[b], model, Zc, subset, p, partials[w]);
  };
  if (W == 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(W);
    for (int w = 0; w < W; ++w) pool.emplace_back(run_chunk, w);
    for (std::thread& t : pool) t.join();
  }

  HeatMapPair out;
  for (HeatMap* hm : {&out.pos, &out.neg}) {
    hm->counts = CountMatrix(p.h, D);
    hm->params = p;
    hm->n_baselines = B;
    hm->seed = seed;
    hm->col_labels = data.feature_names;
    hm->row_labels.reserve(p.h);
    for (int r = 0; r < p.h; ++r)
      hm->row_labels.push_back(latent_row_label(r, model.step_count()));
  }
  out.pos.direction = Direction::kPositive;
  out.neg.direction = Direction::kNegative;
  for (const PartialCounts& pc : partials) {
    for (size_t i = 0; i < pc.pos.data.size(); ++i) {
      out.pos.counts.data[i] += pc.pos.data[i];
      out.neg.counts.data[i] += pc.neg.data[i];
    }
    out.pos.dropped += pc.dropped_pos;
    out.neg.dropped += pc.dropped_neg;
  }
  return out;
}

HeatMap generate_heatmap(Direction d, const Dataset& data, const LatentModel& model,
                         const std::vector<TimeSeriesSample>& baselines,
                         const SelectionParams& params, std::uint64_t seed, int workers) {
  HeatMapPair pair = generate_heatmap_pair(data, model, baselines, params, seed, workers);
  return d == Direction::kPositive ? std::move(pair.pos) : std::move(pair.neg);
}

HeatMap merge_heatmaps(const HeatMap& a, const HeatMap& b) {
  if (a.counts.rows != b.counts.rows || a.counts.cols != b.counts.cols)
    throw InputError("merge_heatmaps: shape mismatch");
  if (a.direction != b.direction) throw InputError("merge_heatmaps: direction mismatch");
  if (!(a.params == b.params)) throw InputError("merge_heatmaps: params mismatch");
  if (a.seed != b.seed) throw InputError("merge_heatmaps: seed mismatch");
  if (a.row_labels != b.row_labels || a.col_labels != b.col_labels)
    throw InputError("merge_heatmaps: label mismatch");
  HeatMap out = a;
  for (size_t i = 0; i < out.counts.data.size(); ++i)
    out.counts.data[i] += b.counts.data[i];
  out.n_baselines += b.n_baselines;
  out.dropped += b.dropped;
  return out;
}

std::string latent_row_label(int row, int step_count) {
  const int s = row / step_count;
  const int n = row % step_count;
  return "z" + std::to_string(s) + "(t" + std::to_string(n) + ")";
}

}  // namespace latentscope
