#include "latentscope/latent_model.hpp"

#include <utility>

#include "latentscope/errors.hpp"

namespace latentscope {

MlpLatentModel::MlpLatentModel(MlpSpec spec, int step_count)
    : spec_(std::move(spec)), steps_(step_count) {
  spec_.validate();
  if (steps_ <= 0) throw InputError("MlpLatentModel: step_count must be positive");
}

std::vector<double> MlpLatentModel::latents(const TimeSeriesSample& sample) const {
  if (sample.values.cols != spec_.input_dim())
    throw InputError("MlpLatentModel: sample '" + sample.id + "' has " +
                     std::to_string(sample.values.cols) + " features, model expects " +
                     std::to_string(spec_.input_dim()));
  if (sample.values.rows != steps_)
    throw InputError("MlpLatentModel: sample '" + sample.id + "' has " +
                     std::to_string(sample.values.rows) + " steps, model expects " +
                     std::to_string(steps_));
  const int H = latent_dim();
  std::vector<double> out(static_cast<size_t>(H) * steps_);
  for (int n = 0; n < steps_; ++n) {
    std::vector<double> z = mlp_forward(spec_, sample.values.row_span(n));
    for (int s = 0; s < H; ++s) out[latent_row(s, n, steps_)] = z[s];
  }
  return out;
}

PairAttribution MlpLatentModel::attribute(const TimeSeriesSample& test,
                                          const TimeSeriesSample& base, int n_quad) const {
  PairAttribution pa = attribute_mlp_per_step(spec_, test.values, base.values, n_quad);
  pa.baseline_id = base.id;
  pa.test_id = test.id;
  return pa;
}

NcdeLatentModel::NcdeLatentModel(VectorField field, std::vector<double> times)
    : field_(std::move(field)), times_(std::move(times)) {
  field_.validate();
  if (times_.size() < 2) throw InputError("NcdeLatentModel: need at least 2 time steps");
  for (size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1]))
      throw InputError("NcdeLatentModel: times must be strictly increasing");
}

std::vector<double> NcdeLatentModel::latents(const TimeSeriesSample& sample) const {
  if (sample.values.cols != field_.input_dim)
    throw InputError("NcdeLatentModel: sample '" + sample.id + "' has " +
                     std::to_string(sample.values.cols) + " features, field expects " +
                     std::to_string(field_.input_dim));
  if (sample.values.rows != static_cast<int>(times_.size()))
    throw InputError("NcdeLatentModel: sample '" + sample.id + "' has " +
                     std::to_string(sample.values.rows) + " steps, grid has " +
                     std::to_string(times_.size()));
  ControlPath path = fit_natural_cubic(times_, sample.values);
  LatentTrajectory traj =
      solve_cde(field_, path, field_.initial_state(), field_.steps_per_interval);
  const int H = latent_dim();
  const int T = step_count();
  std::vector<double> out(static_cast<size_t>(H) * T);
  for (int n = 0; n < T; ++n)
    for (int s = 0; s < H; ++s) out[latent_row(s, n, T)] = traj.states.at(n, s);
  return out;
}

PairAttribution NcdeLatentModel::attribute(const TimeSeriesSample& test,
                                           const TimeSeriesSample& base, int n_quad) const {
  PairAttribution pa =
      attribute_ncde_trajectory(field_, times_, test.values, base.values, n_quad);
  pa.baseline_id = base.id;
  pa.test_id = test.id;
  return pa;
}

}  // namespace latentscope
