#include "latentscope/features.hpp"

#include <algorithm>
#include <cmath>

#include "latentscope/errors.hpp"

namespace latentscope {

std::vector<std::uint8_t> fill_missing(Matrix& values) {
  std::vector<std::uint8_t> mask(values.data.size(), 0);
  for (size_t i = 0; i < values.data.size(); ++i) {
    if (std::isnan(values.data[i])) {
      values.data[i] = 0.0;
      mask[i] = 1;
    }
  }
  return mask;
}

MissingReport fill_missing(Dataset& data) {
  MissingReport report;
  report.per_sample.reserve(data.samples.size());
  for (TimeSeriesSample& s : data.samples) {
    std::vector<std::uint8_t> mask = fill_missing(s.values);
    std::int64_t n = 0;
    for (std::uint8_t m : mask) n += m;
    report.per_sample.push_back(n);
    report.filled += n;
  }
  return report;
}

std::vector<std::string> augmented_names(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  out.reserve(raw.size() * 4);
  for (const std::string& n : raw) out.push_back(n);
  for (const std::string& n : raw) out.push_back(n + "_ctime");
  for (const std::string& n : raw) out.push_back(n + "_cmax");
  for (const std::string& n : raw) out.push_back(n + "_csum");
  return out;
}

Matrix augment(const Matrix& raw) {
  const int T = raw.rows;
  const int D = raw.cols;
  Matrix out(T, 4 * D);
  for (int f = 0; f < D; ++f) {
    int ctime = 0;
    double cmax = 0.0;
    double csum = 0.0;
    for (int n = 0; n < T; ++n) {
      const double v = raw.at(n, f);
      if (std::isnan(v))
        throw InputError("augment: missing value at step " + std::to_string(n) +
                         ", feature " + std::to_string(f) + "; fill it first");
      if (v != 0.0) ++ctime;
      cmax = n == 0 ? v : std::max(cmax, v);
      csum += v;
      out.at(n, f) = v;
      out.at(n, D + f) = static_cast<double>(ctime);
      out.at(n, 2 * D + f) = cmax;
      out.at(n, 3 * D + f) = csum;
    }
  }
  return out;
}

Dataset augment(const Dataset& data) {
  Dataset out;
  out.times = data.times;
  out.feature_names = augmented_names(data.feature_names);
  out.samples.reserve(data.samples.size());
  for (const TimeSeriesSample& s : data.samples)
    out.samples.push_back({s.id, s.label, augment(s.values)});
  return out;
}

FeatureStats fit_minmax(const Dataset& train) {
  if (train.samples.empty()) throw InputError("fit_minmax: no samples");
  const int D = static_cast<int>(train.feature_names.size());
  FeatureStats stats;
  stats.names = train.feature_names;
  stats.min.assign(D, 0.0);
  stats.max.assign(D, 0.0);
  for (int f = 0; f < D; ++f) {
    bool first = true;
    for (const TimeSeriesSample& s : train.samples) {
      for (int n = 0; n < s.values.rows; ++n) {
        const double v = s.values.at(n, f);
        if (std::isnan(v))
          throw InputError("fit_minmax: missing value in sample '" + s.id +
                           "'; fill it first");
        if (first) {
          stats.min[f] = stats.max[f] = v;
          first = false;
        } else {
          stats.min[f] = std::min(stats.min[f], v);
          stats.max[f] = std::max(stats.max[f], v);
        }
      }
    }
  }
  return stats;
}

void apply_minmax_shift(Matrix& values, const FeatureStats& stats) {
  if (values.cols != static_cast<int>(stats.min.size()))
    throw InputError("minmax_shift: series has " + std::to_string(values.cols) +
                     " features, stats cover " + std::to_string(stats.min.size()));
  for (int f = 0; f < values.cols; ++f) {
    const double lo = stats.min[f];
    const double range = stats.max[f] - lo;
    for (int n = 0; n < values.rows; ++n) {
      double& v = values.at(n, f);
      v = range == 0.0 ? 1.0 : (v - lo) / range + 1.0;
    }
  }
}

void apply_minmax_shift(Dataset& data, const FeatureStats& stats) {
  if (data.feature_names != stats.names)
    throw InputError("minmax_shift: feature names do not match the fitted stats");
  for (TimeSeriesSample& s : data.samples) apply_minmax_shift(s.values, stats);
}

}  // namespace latentscope
