#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "latentscope/attribution.hpp"
#include "latentscope/errors.hpp"
#include "latentscope/mlp.hpp"
#include "latentscope/rng.hpp"
#include "latentscope/synth.hpp"
#include "test_util.hpp"

using namespace latentscope;

TEST_CASE("block model jacobian is structurally zero outside each subset") {
  const std::vector<std::vector<int>> subsets = {{0, 1, 2}, {3, 4, 5}};
  const BlockModelSpec block = make_block_model(6, 2, subsets, 11, 1.0);
  SplitMix64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = testutil::random_point(rng, 6, -2.0, 2.0);
    const Matrix J = mlp_jacobian(block.mlp, x);
    for (int s = 0; s < 2; ++s) {
      const std::set<int> inside(subsets[s].begin(), subsets[s].end());
      for (int j = 0; j < 6; ++j) {
        if (!inside.count(j)) CHECK(J.at(s, j) == 0.0);
      }
    }
  }
}

TEST_CASE("singleton subsets make a diagonal-selective model") {
  const std::vector<std::vector<int>> subsets = {{0}, {1}, {2}, {3}};
  const BlockModelSpec block = make_block_model(4, 4, subsets, 21, 0.0);
  SplitMix64 rng(22);
  const auto x = testutil::random_point(rng, 4, -1.0, 1.0);
  const Matrix J = mlp_jacobian(block.mlp, x);
  for (int s = 0; s < 4; ++s) {
    for (int j = 0; j < 4; ++j) {
      if (s == j) {
        CHECK(std::abs(J.at(s, j)) > 1e-6);
      } else {
        CHECK(J.at(s, j) == 0.0);
      }
    }
  }
}

TEST_CASE("integrated jacobians inherit the structural zeros") {
  const std::vector<std::vector<int>> subsets = {{0, 2}, {1, 3, 4}};
  const BlockModelSpec block = make_block_model(5, 2, subsets, 31, 1.0);
  SplitMix64 rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = testutil::random_point(rng, 5, 0.5, 2.5);
    const auto x_hat = testutil::random_point(rng, 5, 0.5, 2.5);
    const PairAttribution pa = integrated_jacobian(block.mlp, x, x_hat, 17);
    for (int s = 0; s < 2; ++s) {
      const std::set<int> inside(subsets[s].begin(), subsets[s].end());
      for (int j = 0; j < 5; ++j) {
        if (!inside.count(j)) CHECK(pa.j.at(s, j) == 0.0);
      }
    }
  }
}

TEST_CASE("block model shape and bias centering") {
  const std::vector<std::vector<int>> subsets = {{0, 1}, {2, 3, 4}, {5}};
  const BlockModelSpec block = make_block_model(6, 3, subsets, 41, 1.5);
  CHECK(block.mlp.layer_dims == std::vector<int>{6, 3, 3});
  CHECK(block.mlp.activations[0] == Activation::kTanh);
  CHECK(block.mlp.activations[1] == Activation::kIdentity);

  const Matrix& w1 = block.mlp.weights[0];
  const Matrix& w2 = block.mlp.weights[1];
  for (int s = 0; s < 3; ++s) {
    double wsum = 0.0;
    for (int j = 0; j < 6; ++j) wsum += w1.at(s, j);
    // each hidden unit is centered on inputs sitting at 1.5 per feature
    CHECK(block.mlp.biases[0][s] == -1.5 * wsum);
    for (int j : subsets[s]) {
      const double mag = std::abs(w1.at(s, j));
      CHECK(mag >= 0.5);
      CHECK(mag <= 1.5);
    }
    for (int t = 0; t < 3; ++t) {
      if (t != s) CHECK(w2.at(s, t) == 0.0);
    }
    CHECK(std::abs(w2.at(s, s)) >= 0.5);
  }
}

TEST_CASE("block model rejects malformed subsets") {
  CHECK_THROWS_AS(make_block_model(4, 2, {{0, 1}, {1, 2}}, 1), InputError);  // overlap
  CHECK_THROWS_AS(make_block_model(4, 2, {{0}, {4}}, 1), InputError);        // out of range
  CHECK_THROWS_AS(make_block_model(4, 2, {{0, 1, 2, 3}}, 1), InputError);    // wrong count
  CHECK_THROWS_AS(make_block_model(4, 2, {{0, 1}, {}}, 1), InputError);      // empty subset
}

TEST_CASE("synthetic counts look like sparse sensors") {
  for (std::uint64_t seed : {0ULL, 7ULL, 19ULL}) {
    const Dataset data = make_dataset(40, 6, 5, seed);
    CHECK(data.sample_count() == 40);
    CHECK(data.step_count() == 6);
    CHECK(data.feature_count() == 5);
    int zeros = 0, ones = 0;
    for (const TimeSeriesSample& s : data.samples) {
      (s.label ? ones : zeros)++;
      for (int f = 0; f < 5; ++f) {
        CHECK(s.values.at(0, f) >= 1.0);  // the first step always reads
        for (int t = 0; t < 6; ++t) {
          const double v = s.values.at(t, f);
          CHECK(v >= 0.0);
          CHECK(v == std::floor(v));
        }
      }
    }
    CHECK(zeros > 0);
    CHECK(ones > 0);
  }
}

TEST_CASE("dataset generation is seed-deterministic") {
  const Dataset a = make_dataset(15, 4, 3, 123);
  const Dataset b = make_dataset(15, 4, 3, 123);
  const Dataset c = make_dataset(15, 4, 3, 124);
  REQUIRE(a.sample_count() == b.sample_count());
  bool same_as_c = true;
  for (int i = 0; i < a.sample_count(); ++i) {
    CHECK(a.samples[i].values.data == b.samples[i].values.data);
    CHECK(a.samples[i].label == b.samples[i].label);
    CHECK(a.samples[i].id == b.samples[i].id);
    if (a.samples[i].values.data != c.samples[i].values.data) same_as_c = false;
  }
  CHECK(!same_as_c);
}

TEST_CASE("subset expansion covers every derived column") {
  const auto expanded = expand_subsets({{0, 2}, {1}}, 3);
  REQUIRE(expanded.size() == 2);
  CHECK(expanded[0] == std::vector<int>{0, 2, 3, 5, 6, 8, 9, 11});
  CHECK(expanded[1] == std::vector<int>{1, 4, 7, 10});
}

namespace {

HeatMap tiny_map(int rows, int cols) {
  HeatMap M;
  M.counts = CountMatrix(rows, cols);
  return M;
}

}  // namespace

TEST_CASE("recovery score fractions") {
  const std::vector<std::vector<int>> raw_subsets = {{0, 1}, {2, 3}};
  // 2 states x 1 step, 4 raw features x 4 kinds = 16 columns
  HeatMap M = tiny_map(2, 16);
  // row 0: all mass on raw features 0/1 across kinds
  M.counts.at(0, 0) = 3;
  M.counts.at(0, 5) = 2;   // ctime block, raw 1
  M.counts.at(0, 12) = 1;  // csum block, raw 0
  // row 1: half in subset {2,3}, half outside
  M.counts.at(1, 2) = 5;
  M.counts.at(1, 4) = 5;   // ctime block, raw 0 -> outside
  const auto scores = recovery_score(M, raw_subsets, 4);
  REQUIRE(scores.size() == 2);
  CHECK(scores[0] == 1.0);
  CHECK(scores[1] == 0.5);
}

TEST_CASE("uniform mass recovers the subset fraction") {
  // 12 raw features in subsets of 3: uniform counts leave 1/4 inside
  const std::vector<std::vector<int>> raw_subsets = {
      {0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}};
  HeatMap M = tiny_map(4, 48);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 48; ++c) M.counts.at(r, c) = 1;
  for (double s : recovery_score(M, raw_subsets, 12)) CHECK(s == 0.25);
}

TEST_CASE("empty rows score zero instead of dividing by it") {
  HeatMap M = tiny_map(2, 8);
  M.counts.at(0, 0) = 4;
  const auto scores = recovery_score(M, {{0}, {1}}, 2);
  CHECK(scores[0] == 1.0);
  CHECK(scores[1] == 0.0);
}

TEST_CASE("recovery score rejects shapes that do not factor") {
  HeatMap M = tiny_map(3, 8);
  CHECK_THROWS_AS(recovery_score(M, {{0}, {1}}, 2), InputError);   // 3 rows over 2 states
  HeatMap N = tiny_map(2, 7);
  CHECK_THROWS_AS(recovery_score(N, {{0}, {1}}, 2), InputError);   // 7 cols over 2 raws
  HeatMap P = tiny_map(2, 8);
  CHECK_THROWS_AS(recovery_score(P, {{0}, {2}}, 2), InputError);   // raw index out of range
}
