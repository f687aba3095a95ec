#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "latentscope/errors.hpp"
#include "latentscope/heatmap.hpp"
#include "latentscope/latent_model.hpp"
#include "latentscope/rng.hpp"
#include "latentscope/synth.hpp"
#include "test_util.hpp"

using namespace latentscope;

TEST_CASE("cosine similarity basics") {
  const std::vector<double> ex = {1.0, 0.0}, ey = {0.0, 1.0}, zero = {0.0, 0.0};
  CHECK(cosine_similarity(ex, ey) == 0.0);
  CHECK(cosine_similarity(ex, ex) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cosine_similarity(ex, std::vector<double>{-2.0, 0.0}) ==
        doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(cosine_similarity(zero, ex) == 0.0);
  CHECK(cosine_similarity(ex, zero) == 0.0);
}

TEST_CASE("balanced subset splits classes down the middle") {
  const std::vector<int> y = {0, 0, 0, 1, 1, 1};
  const auto picked = balanced_subset(y, 4, 7);
  REQUIRE(picked.size() == 4);
  int zeros = 0, ones = 0;
  for (int i : picked) (y[i] == 0 ? zeros : ones)++;
  CHECK(zeros == 2);
  CHECK(ones == 2);
  CHECK(std::is_sorted(picked.begin(), picked.end()));

  const auto odd = balanced_subset(y, 5, 7);
  REQUIRE(odd.size() == 5);
  zeros = ones = 0;
  for (int i : odd) (y[i] == 0 ? zeros : ones)++;
  CHECK(zeros == 2);  // floor(m/2) from class 0
  CHECK(ones == 3);
}

TEST_CASE("balanced subset at full size is a permutation") {
  const std::vector<int> y = {0, 1, 0, 1, 0, 1};
  auto picked = balanced_subset(y, 6, 19);
  std::sort(picked.begin(), picked.end());
  CHECK(picked == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("balanced subset is seed-deterministic and bounded by class sizes") {
  const std::vector<int> y = {0, 0, 0, 0, 1, 1, 1, 1, 1};
  CHECK(balanced_subset(y, 6, 123) == balanced_subset(y, 6, 123));
  CHECK(balanced_subset(y, 6, 123) != balanced_subset(y, 6, 124));
  CHECK_THROWS_AS(balanced_subset(std::vector<int>{0, 1, 1, 1}, 4, 1), InputError);
}

TEST_CASE("most dissimilar rows come out in ascending similarity order") {
  Matrix Zc(3, 2);
  Zc.at(0, 0) = 1.0;  // cos = 1
  Zc.at(1, 1) = 1.0;  // cos = 0
  Zc.at(2, 0) = -1.0; // cos = -1
  const std::vector<double> z_hat = {1.0, 0.0};
  CHECK(top_dissimilar_samples(Zc, z_hat, 1) == std::vector<int>{2});
  CHECK(top_dissimilar_samples(Zc, z_hat, 3) == std::vector<int>{2, 1, 0});
}

TEST_CASE("dissimilarity selection matches an exhaustive sort, ties included") {
  SplitMix64 rng(77);
  for (int instance = 0; instance < 30; ++instance) {
    const int rows = 2 + static_cast<int>(rng.next_below(49));
    const int cols = 1 + static_cast<int>(rng.next_below(8));
    Matrix Zc(rows, cols);
    for (double& v : Zc.data) v = rng.uniform(-1.0, 1.0);
    if (instance % 3 == 0 && rows >= 4) {
      // force exact ties by duplicating rows
      for (int c = 0; c < cols; ++c) {
        Zc.at(1, c) = Zc.at(0, c);
        Zc.at(3, c) = Zc.at(2, c);
      }
    }
    const auto z_hat = testutil::random_point(rng, cols, -1.0, 1.0);
    const int k = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(rows)));

    std::vector<int> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> sim(rows);
    for (int i = 0; i < rows; ++i) sim[i] = cosine_similarity(Zc.row_span(i), z_hat);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sim[a] < sim[b]; });
    order.resize(k);

    CHECK(top_dissimilar_samples(Zc, z_hat, k) == order);
  }
}

namespace {

TimeSeriesSample sample_of(std::string id, int label, const Matrix& values) {
  TimeSeriesSample s;
  s.id = std::move(id);
  s.label = label;
  s.values = values;
  return s;
}

// one-step dataset around the 2x2 linear extractor
Dataset tiny_dataset(int n, std::uint64_t seed) {
  Dataset data;
  data.times = {0.0};
  data.feature_names = {"a", "b"};
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    Matrix v(1, 2);
    v.at(0, 0) = rng.uniform(-2.0, 2.0);
    v.at(0, 1) = rng.uniform(-2.0, 2.0);
    data.samples.push_back(sample_of("s" + std::to_string(i), i % 2, v));
  }
  return data;
}

}  // namespace

TEST_CASE("top features of a linear impact row, both directions") {
  const MlpLatentModel model(testutil::linear_2x2(), 1);
  const TimeSeriesSample base = sample_of("base", 0, [] {
    Matrix v(1, 2);
    return v;
  }());
  Matrix tv(1, 2);
  tv.at(0, 0) = 1.0;
  tv.at(0, 1) = 1.0;
  const TimeSeriesSample test = sample_of("test", 1, tv);

  std::vector<const TimeSeriesSample*> selected = {&test};
  const TopFeatureResult pos =
      top_impactful_features(Direction::kPositive, model, base, selected, 1, 1, 1e-12);
  const TopFeatureResult neg =
      top_impactful_features(Direction::kNegative, model, base, selected, 1, 1, 1e-12);
  // p rows are (1/3, 2/3) and (3/7, 4/7): feature 1 leads positive, 0 negative
  for (int r = 0; r < 2; ++r) {
    CHECK(pos.features[0][r] == std::vector<int>{1});
    CHECK(neg.features[0][r] == std::vector<int>{0});
    CHECK(pos.guarded[0][r] == 0);
  }
}

TEST_CASE("guarded rows fall back to placeholder feature indices") {
  const MlpLatentModel model(testutil::linear_2x2(), 1);
  Matrix v(1, 2);
  v.at(0, 0) = 0.5;
  v.at(0, 1) = -0.5;
  const TimeSeriesSample base = sample_of("base", 0, v);
  const TimeSeriesSample same = sample_of("same", 1, v);
  std::vector<const TimeSeriesSample*> selected = {&same};
  const TopFeatureResult r =
      top_impactful_features(Direction::kPositive, model, base, selected, 2, 4, 1e-12);
  for (int row = 0; row < 2; ++row) {
    CHECK(r.guarded[0][row] == 1);
    CHECK(r.features[0][row] == std::vector<int>{0, 1});
  }
}

TEST_CASE("top feature extraction matches a brute-force recompute") {
  SplitMix64 rng(88);
  const MlpSpec net = make_random_tanh_mlp({6, 8, 4}, 31);
  const MlpLatentModel model(net, 1);
  Dataset data;
  data.times = {0.0};
  for (int j = 0; j < 6; ++j) data.feature_names.push_back("f" + std::to_string(j));

  for (int instance = 0; instance < 20; ++instance) {
    Matrix bv(1, 6);
    for (double& x : bv.data) x = rng.uniform(-2.0, 2.0);
    const TimeSeriesSample base = sample_of("base", 0, bv);

    std::vector<TimeSeriesSample> pool;
    for (int i = 0; i < 5; ++i) {
      Matrix tv(1, 6);
      for (double& x : tv.data) x = rng.uniform(-2.0, 2.0);
      pool.push_back(sample_of("t" + std::to_string(i), 1, tv));
    }
    std::vector<const TimeSeriesSample*> selected;
    for (const auto& s : pool) selected.push_back(&s);

    const int l = 3;
    for (Direction d : {Direction::kPositive, Direction::kNegative}) {
      const TopFeatureResult got =
          top_impactful_features(d, model, base, selected, l, 16, 1e-12);
      for (std::size_t ki = 0; ki < selected.size(); ++ki) {
        const PairAttribution pa = model.attribute(*selected[ki], base, 16);
        const ImpactMatrix im = impact_measure(pa, 1e-12);
        for (int r = 0; r < 4; ++r) {
          REQUIRE(im.guarded[r] == 0);
          std::vector<int> idx(6);
          std::iota(idx.begin(), idx.end(), 0);
          std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return d == Direction::kPositive ? im.p.at(r, a) > im.p.at(r, b)
                                             : im.p.at(r, a) < im.p.at(r, b);
          });
          idx.resize(l);
          CHECK(got.features[ki][r] == idx);
        }
      }
    }
  }
}

TEST_CASE("heat map row sums count every increment") {
  const Dataset data = tiny_dataset(24, 5);
  const MlpLatentModel model(testutil::linear_2x2(), 1);
  std::vector<TimeSeriesSample> baselines = {data.samples[0], data.samples[1],
                                             data.samples[2]};
  SelectionParams p;
  p.m = 12;
  p.k = 4;
  p.l = 2;
  const HeatMapPair pair = generate_heatmap_pair(data, model, baselines, p, 9);
  for (const HeatMap* m : {&pair.pos, &pair.neg}) {
    REQUIRE(m->counts.rows == 2);
    REQUIRE(m->counts.cols == 2);
    CHECK(m->dropped == 0);
    for (int r = 0; r < m->counts.rows; ++r)
      CHECK(m->counts.row_sum(r) == static_cast<std::int64_t>(baselines.size()) * p.k * p.l);
  }
  CHECK(pair.pos.row_labels == std::vector<std::string>{"z0(t0)", "z1(t0)"});
  CHECK(pair.pos.col_labels == data.feature_names);
  CHECK(pair.pos.n_baselines == 3);
}

TEST_CASE("zero-shift pairs drop their increments and are reported") {
  // every sample identical: all delta_z vanish, everything is guarded
  Dataset data;
  data.times = {0.0};
  data.feature_names = {"a", "b"};
  Matrix v(1, 2);
  v.at(0, 0) = 1.0;
  v.at(0, 1) = 2.0;
  for (int i = 0; i < 8; ++i)
    data.samples.push_back(sample_of("s" + std::to_string(i), i % 2, v));
  const MlpLatentModel model(testutil::linear_2x2(), 1);
  std::vector<TimeSeriesSample> baselines = {data.samples[0]};
  SelectionParams p;
  p.m = 6;
  p.k = 2;
  p.l = 2;
  const HeatMap m = generate_heatmap(Direction::kPositive, data, model, baselines, p, 3);
  for (int r = 0; r < m.counts.rows; ++r) CHECK(m.counts.row_sum(r) == 0);
  // one baseline x k samples x 2 latent rows, l increments each
  CHECK(m.dropped == 1 * p.k * 2 * p.l);
}

TEST_CASE("identical seeds give identical maps, different seeds can differ") {
  const Dataset data = tiny_dataset(30, 6);
  const MlpLatentModel model(make_random_tanh_mlp({2, 6, 3}, 44), 1);
  std::vector<TimeSeriesSample> baselines = {data.samples[3], data.samples[8]};
  SelectionParams p;
  p.m = 16;
  p.k = 3;
  p.l = 1;  // with l == feature count every row picks everything and seeds can't show
  const HeatMap a = generate_heatmap(Direction::kPositive, data, model, baselines, p, 11);
  const HeatMap b = generate_heatmap(Direction::kPositive, data, model, baselines, p, 11);
  CHECK(a.counts.data == b.counts.data);
  bool any_differ = false;
  for (std::uint64_t s = 12; s < 20 && !any_differ; ++s) {
    const HeatMap c = generate_heatmap(Direction::kPositive, data, model, baselines, p, s);
    any_differ = a.counts.data != c.counts.data;
  }
  CHECK(any_differ);
}

TEST_CASE("worker count never changes the result") {
  const Dataset data = tiny_dataset(40, 7);
  const MlpLatentModel model(make_random_tanh_mlp({2, 6, 3}, 45), 1);
  std::vector<TimeSeriesSample> baselines;
  for (int i = 0; i < 7; ++i) baselines.push_back(data.samples[i]);
  SelectionParams p;
  p.m = 20;
  p.k = 4;
  p.l = 2;
  const HeatMapPair serial = generate_heatmap_pair(data, model, baselines, p, 13, 1);
  const HeatMapPair wide = generate_heatmap_pair(data, model, baselines, p, 13, 4);
  const HeatMapPair wider = generate_heatmap_pair(data, model, baselines, p, 13, 11);
  CHECK(serial.pos.counts.data == wide.pos.counts.data);
  CHECK(serial.neg.counts.data == wide.neg.counts.data);
  CHECK(serial.pos.counts.data == wider.pos.counts.data);
  CHECK(serial.pos.dropped == wide.pos.dropped);
}

TEST_CASE("row cap keeps only the first h latent rows") {
  const Dataset data = tiny_dataset(20, 8);
  const MlpLatentModel model(make_random_tanh_mlp({2, 5, 4}, 46), 1);
  std::vector<TimeSeriesSample> baselines = {data.samples[0]};
  SelectionParams p;
  p.m = 10;
  p.k = 2;
  p.l = 1;
  p.h = 2;
  const HeatMap m = generate_heatmap(Direction::kNegative, data, model, baselines, p, 14);
  CHECK(m.counts.rows == 2);
  CHECK(m.row_labels == std::vector<std::string>{"z0(t0)", "z1(t0)"});
}

TEST_CASE("merging halves equals the single pass") {
  const Dataset data = tiny_dataset(30, 9);
  const MlpLatentModel model(make_random_tanh_mlp({2, 6, 3}, 47), 1);
  std::vector<TimeSeriesSample> baselines;
  for (int i = 0; i < 6; ++i) baselines.push_back(data.samples[i]);
  SelectionParams p;
  p.m = 14;
  p.k = 3;
  p.l = 2;

  const HeatMap whole = generate_heatmap(Direction::kPositive, data, model, baselines, p, 21);
  std::vector<TimeSeriesSample> first(baselines.begin(), baselines.begin() + 3);
  std::vector<TimeSeriesSample> second(baselines.begin() + 3, baselines.end());
  const HeatMap a = generate_heatmap(Direction::kPositive, data, model, first, p, 21);
  const HeatMap b = generate_heatmap(Direction::kPositive, data, model, second, p, 21);

  const HeatMap ab = merge_heatmaps(a, b);
  const HeatMap ba = merge_heatmaps(b, a);
  CHECK(ab.counts.data == whole.counts.data);
  CHECK(ba.counts.data == whole.counts.data);
  CHECK(ab.n_baselines == whole.n_baselines);
  CHECK(ab.dropped == whole.dropped);

  HeatMap zero = a;
  std::fill(zero.counts.data.begin(), zero.counts.data.end(), 0);
  zero.n_baselines = 0;
  zero.dropped = 0;
  const HeatMap same = merge_heatmaps(a, zero);
  CHECK(same.counts.data == a.counts.data);
  CHECK(same.n_baselines == a.n_baselines);
}

TEST_CASE("merge refuses mismatched metadata") {
  const Dataset data = tiny_dataset(20, 10);
  const MlpLatentModel model(testutil::linear_2x2(), 1);
  std::vector<TimeSeriesSample> baselines = {data.samples[0]};
  SelectionParams p;
  p.m = 10;
  p.k = 2;
  p.l = 1;
  const HeatMap pos = generate_heatmap(Direction::kPositive, data, model, baselines, p, 1);
  const HeatMap neg = generate_heatmap(Direction::kNegative, data, model, baselines, p, 1);
  CHECK_THROWS_AS(merge_heatmaps(pos, neg), InputError);

  SelectionParams q = p;
  q.l = 2;
  const HeatMap other = generate_heatmap(Direction::kPositive, data, model, baselines, q, 1);
  CHECK_THROWS_AS(merge_heatmaps(pos, other), InputError);
}

TEST_CASE("parameter validation rejects impossible selections") {
  const Dataset data = tiny_dataset(10, 11);
  const MlpLatentModel model(testutil::linear_2x2(), 1);
  std::vector<TimeSeriesSample> baselines = {data.samples[0]};

  SelectionParams k_too_big;
  k_too_big.m = 4;
  k_too_big.k = 5;
  k_too_big.l = 1;
  CHECK_THROWS_AS(generate_heatmap_pair(data, model, baselines, k_too_big, 0), InputError);

  SelectionParams l_too_big;
  l_too_big.m = 4;
  l_too_big.k = 2;
  l_too_big.l = 3;  // model has D = 2
  CHECK_THROWS_AS(generate_heatmap_pair(data, model, baselines, l_too_big, 0), InputError);

  SelectionParams fine;
  fine.m = 4;
  fine.k = 2;
  fine.l = 2;
  CHECK_THROWS_AS(
      generate_heatmap_pair(data, model, std::vector<TimeSeriesSample>{}, fine, 0),
      InputError);
}

TEST_CASE("latent row labels walk time inside each state") {
  CHECK(latent_row_label(0, 4) == "z0(t0)");
  CHECK(latent_row_label(3, 4) == "z0(t3)");
  CHECK(latent_row_label(4, 4) == "z1(t0)");
  CHECK(latent_row_label(9, 4) == "z2(t1)");
}
