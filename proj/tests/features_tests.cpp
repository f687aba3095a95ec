#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "latentscope/errors.hpp"
#include "latentscope/features.hpp"
#include "latentscope/rng.hpp"
#include "test_util.hpp"

using namespace latentscope;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Matrix column(std::vector<double> v) {
  Matrix m(static_cast<int>(v.size()), 1);
  m.data = std::move(v);
  return m;
}

}  // namespace

TEST_CASE("cumulative channels of a sparse column") {
  const Matrix aug = augment(column({0.0, 2.0, 0.0, 5.0}));
  REQUIRE(aug.cols == 4);
  // layout: raw, ctime, cmax, csum
  const std::vector<double> ctime = {aug.at(0, 1), aug.at(1, 1), aug.at(2, 1), aug.at(3, 1)};
  const std::vector<double> cmax = {aug.at(0, 2), aug.at(1, 2), aug.at(2, 2), aug.at(3, 2)};
  const std::vector<double> csum = {aug.at(0, 3), aug.at(1, 3), aug.at(2, 3), aug.at(3, 3)};
  CHECK(ctime == std::vector<double>{0.0, 1.0, 1.0, 2.0});
  CHECK(cmax == std::vector<double>{0.0, 2.0, 2.0, 5.0});
  CHECK(csum == std::vector<double>{0.0, 2.0, 2.0, 7.0});
  for (int n = 0; n < 4; ++n) CHECK(aug.at(n, 0) == column({0.0, 2.0, 0.0, 5.0}).at(n, 0));
}

TEST_CASE("augmentation widths match the two clinical schemas") {
  SplitMix64 rng(1);
  Matrix sepsis(72, 34);
  for (double& v : sepsis.data) v = rng.uniform(0.0, 3.0);
  const Matrix aug72 = augment(sepsis);
  CHECK(aug72.rows == 72);
  CHECK(aug72.cols == 136);

  Matrix dementia(12, 36);
  for (double& v : dementia.data) v = rng.uniform(0.0, 3.0);
  const Matrix aug12 = augment(dementia);
  CHECK(aug12.rows == 12);
  CHECK(aug12.cols == 144);

  std::vector<std::string> raw_names;
  for (int j = 0; j < 34; ++j) raw_names.push_back("f" + std::to_string(j));
  const auto names = augmented_names(raw_names);
  REQUIRE(names.size() == 136);
  CHECK(names[0] == "f0");
  CHECK(names[34] == "f0_ctime");
  CHECK(names[68] == "f0_cmax");
  CHECK(names[102] == "f0_csum");
  CHECK(names[135] == "f33_csum");
}

TEST_CASE("cumulative invariants on random non-negative input") {
  SplitMix64 rng(3);
  Matrix raw(20, 4);
  for (double& v : raw.data) v = rng.next_double() < 0.4 ? 0.0 : rng.uniform(0.0, 9.0);
  const Matrix aug = augment(raw);
  const int D = 4;
  for (int f = 0; f < D; ++f) {
    double prev_ctime = -1.0, prev_cmax = -1.0, prev_csum = -1.0, total = 0.0;
    for (int n = 0; n < raw.rows; ++n) {
      const double ctime = aug.at(n, D + f);
      const double cmax = aug.at(n, 2 * D + f);
      const double csum = aug.at(n, 3 * D + f);
      CHECK(ctime == std::floor(ctime));
      CHECK(ctime <= n + 1);
      CHECK(ctime >= prev_ctime);
      CHECK(cmax >= prev_cmax);
      CHECK(csum >= prev_csum);
      CHECK(aug.at(n, f) == raw.at(n, f));  // raw block untouched
      prev_ctime = ctime;
      prev_cmax = cmax;
      prev_csum = csum;
      total += raw.at(n, f);
    }
    CHECK(aug.at(raw.rows - 1, 3 * D + f) == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("augment refuses unfilled input") {
  Matrix raw(2, 1);
  raw.at(0, 0) = 1.0;
  raw.at(1, 0) = kNan;
  CHECK_THROWS_AS(augment(raw), InputError);
}

TEST_CASE("fill_missing zeroes the gaps and reports them") {
  Matrix values(3, 2);
  values.at(0, 0) = 1.0;
  values.at(0, 1) = kNan;
  values.at(1, 0) = kNan;
  values.at(1, 1) = kNan;
  values.at(2, 0) = 2.0;
  values.at(2, 1) = 3.0;
  const auto mask = fill_missing(values);
  CHECK(values.at(0, 1) == 0.0);
  CHECK(values.at(1, 0) == 0.0);
  CHECK(values.at(1, 1) == 0.0);
  CHECK(values.at(0, 0) == 1.0);
  int filled = 0;
  for (auto m : mask) filled += m;
  CHECK(filled == 3);
  CHECK(mask[1] == 1);
  CHECK(mask[0] == 0);
}

TEST_CASE("a series observed 40 of 72 hours gains 32 zero rows") {
  Matrix values(72, 2);
  for (int n = 0; n < 72; ++n)
    for (int j = 0; j < 2; ++j) values.at(n, j) = n < 40 ? 1.0 + n : kNan;
  fill_missing(values);
  int zero_rows = 0;
  for (int n = 0; n < 72; ++n) {
    if (values.at(n, 0) == 0.0 && values.at(n, 1) == 0.0) ++zero_rows;
  }
  CHECK(zero_rows == 32);
}

TEST_CASE("fully observed data is left alone") {
  Matrix values(4, 3);
  for (double& v : values.data) v = 1.25;
  const Matrix before = values;
  const auto mask = fill_missing(values);
  CHECK(values.data == before.data);
  for (auto m : mask) CHECK(m == 0);
}

TEST_CASE("minmax shift arithmetic") {
  FeatureStats stats;
  stats.names = {"f"};
  stats.min = {0.0};
  stats.max = {10.0};
  Matrix values = column({5.0, 0.0, 10.0});
  apply_minmax_shift(values, stats);
  CHECK(values.at(0, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(values.at(1, 0) == 1.0);  // x = min maps to 1 exactly
  CHECK(values.at(2, 0) == 2.0);  // x = max maps to 2 exactly
}

TEST_CASE("constant features collapse to 1") {
  FeatureStats stats;
  stats.names = {"f"};
  stats.min = {7.0};
  stats.max = {7.0};
  Matrix values = column({7.0, 7.0});
  apply_minmax_shift(values, stats);
  CHECK(values.at(0, 0) == 1.0);
  CHECK(values.at(1, 0) == 1.0);
}

TEST_CASE("fitted shift lands the training data in [1,2] and keeps order") {
  SplitMix64 rng(12);
  Dataset data;
  data.times = {0.0, 1.0, 2.0};
  data.feature_names = {"a", "b"};
  for (int i = 0; i < 6; ++i) {
    TimeSeriesSample s;
    s.id = "s" + std::to_string(i);
    s.label = i % 2;
    s.values = Matrix(3, 2);
    for (double& v : s.values.data) v = rng.uniform(-4.0, 9.0);
    data.samples.push_back(std::move(s));
  }
  Dataset shifted = data;
  const FeatureStats stats = fit_minmax(shifted);
  apply_minmax_shift(shifted, stats);

  double lo = 10.0, hi = -10.0;
  for (const auto& s : shifted.samples) {
    for (double v : s.values.data) {
      CHECK(v >= 1.0);
      CHECK(v <= 2.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  CHECK(lo == 1.0);  // the fitted extremes map onto the endpoints exactly
  CHECK(hi == 2.0);

  // monotone per feature: order of two cells within a feature is preserved
  for (int j = 0; j < 2; ++j) {
    const double raw0 = data.samples[0].values.at(0, j);
    const double raw1 = data.samples[1].values.at(1, j);
    const double out0 = shifted.samples[0].values.at(0, j);
    const double out1 = shifted.samples[1].values.at(1, j);
    CHECK(((raw0 < raw1) == (out0 < out1)));
  }
}

TEST_CASE("slicing the first block of an augmented dataset recovers the input") {
  SplitMix64 rng(14);
  Dataset data;
  data.times = {0.0, 1.0, 2.0, 3.0};
  data.feature_names = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    TimeSeriesSample s;
    s.id = "s" + std::to_string(i);
    s.values = Matrix(4, 3);
    for (double& v : s.values.data) v = rng.next_double() < 0.3 ? 0.0 : rng.uniform(0.0, 5.0);
    data.samples.push_back(std::move(s));
  }
  const Dataset aug = augment(data);
  REQUIRE(aug.feature_names.size() == 12);
  CHECK(aug.feature_names[3] == "x_ctime");
  for (int i = 0; i < 3; ++i) {
    for (int n = 0; n < 4; ++n)
      for (int j = 0; j < 3; ++j)
        CHECK(aug.samples[i].values.at(n, j) == data.samples[i].values.at(n, j));
  }
}
