#include "latentscope/dataset.hpp"

#include <cmath>
#include <string>

#include "latentscope/errors.hpp"

namespace latentscope {

void Dataset::validate(bool require_complete) const {
  if (times.size() < 2) throw InputError("dataset: need at least 2 time steps");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw InputError("dataset: times must be strictly increasing (step " +
                       std::to_string(i) + ")");
  const int T = static_cast<int>(times.size());
  const int D = static_cast<int>(feature_names.size());
  if (D <= 0) throw InputError("dataset: no features");
  if (samples.empty()) throw InputError("dataset: no samples");
  for (const TimeSeriesSample& s : samples) {
    if (s.id.empty()) throw InputError("dataset: sample with empty id");
    if (s.values.rows != T)
      throw InputError("dataset: sample '" + s.id + "' has " +
                       std::to_string(s.values.rows) + " steps, grid has " +
                       std::to_string(T));
    if (s.values.cols != D)
      throw InputError("dataset: sample '" + s.id + "' has " +
                       std::to_string(s.values.cols) + " features, header has " +
                       std::to_string(D));
    if (s.label != 0 && s.label != 1)
      throw InputError("dataset: sample '" + s.id + "' has label " +
                       std::to_string(s.label) + ", expected 0 or 1");
    if (require_complete) {
      for (double v : s.values.data)
        if (std::isnan(v))
          throw InputError("dataset: sample '" + s.id +
                           "' has missing values; fill them first");
    }
  }
}

const TimeSeriesSample& Dataset::by_id(const std::string& id) const {
  for (const TimeSeriesSample& s : samples)
    if (s.id == id) return s;
  throw InputError("dataset: no sample with id '" + id + "'");
}

}  // namespace latentscope
