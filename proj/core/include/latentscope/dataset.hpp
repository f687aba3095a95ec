#pragma once

#include <string>
#include <vector>

#include "latentscope/matrix.hpp"

namespace latentscope {

/// One observed series: T x D feature matrix plus a binary label.
/// Missing entries are NaN until filled.
struct TimeSeriesSample {
  std::string id;
  int label = 0;
  Matrix values;  // T x D
};

/// Samples sharing one knot-time grid and one feature naming.
struct Dataset {
  std::vector<double> times;
  std::vector<std::string> feature_names;
  std::vector<TimeSeriesSample> samples;

  int step_count() const { return static_cast<int>(times.size()); }
  int feature_count() const { return static_cast<int>(feature_names.size()); }
  int sample_count() const { return static_cast<int>(samples.size()); }

  std::vector<int> labels() const {
    std::vector<int> y;
    y.reserve(samples.size());
    for (const auto& s : samples) y.push_back(s.label);
    return y;
  }

  /// Throws InputError on shape mismatches or (when require_complete) NaN cells.
  void validate(bool require_complete) const;

  const TimeSeriesSample& by_id(const std::string& id) const;
};

/// Heat-map rows enumerate all (state, time) pairs, state-major:
/// row = state * T + time_index.
inline int latent_row(int state, int time_index, int step_count) {
  return state * step_count + time_index;
}

}  // namespace latentscope
