#pragma once

#include <memory>
#include <vector>

#include "latentscope/attribution.hpp"
#include "latentscope/dataset.hpp"
#include "latentscope/matrix.hpp"
#include "latentscope/mlp.hpp"
#include "latentscope/ncde.hpp"

namespace latentscope {

/// A differentiable model exposing latent states over a sample's time grid.
/// Latents are flattened state-major: entry state * T + time_index. The same
/// ordering labels heat-map rows and readout weights.
class LatentModel {
 public:
  virtual ~LatentModel() = default;

  virtual int latent_dim() const = 0;   // H
  virtual int feature_dim() const = 0;  // D
  virtual int step_count() const = 0;   // T
  int latent_row_count() const { return latent_dim() * step_count(); }

  virtual std::vector<double> latents(const TimeSeriesSample& sample) const = 0;

  /// Full-grid integrated Jacobian between a test and a baseline sample.
  virtual PairAttribution attribute(const TimeSeriesSample& test,
                                    const TimeSeriesSample& base, int n_quad) const = 0;
};

/// MLP latent extractor applied independently at every time step.
class MlpLatentModel : public LatentModel {
 public:
  MlpLatentModel(MlpSpec spec, int step_count);

  int latent_dim() const override { return spec_.output_dim(); }
  int feature_dim() const override { return spec_.input_dim(); }
  int step_count() const override { return steps_; }

  std::vector<double> latents(const TimeSeriesSample& sample) const override;
  PairAttribution attribute(const TimeSeriesSample& test, const TimeSeriesSample& base,
                            int n_quad) const override;

  const MlpSpec& spec() const { return spec_; }

 private:
  MlpSpec spec_;
  int steps_;
};

/// Neural CDE over the dataset's knot grid; latents are the trajectory states.
class NcdeLatentModel : public LatentModel {
 public:
  NcdeLatentModel(VectorField field, std::vector<double> times);

  int latent_dim() const override { return field_.latent_dim; }
  int feature_dim() const override { return field_.input_dim; }
  int step_count() const override { return static_cast<int>(times_.size()); }

  std::vector<double> latents(const TimeSeriesSample& sample) const override;
  PairAttribution attribute(const TimeSeriesSample& test, const TimeSeriesSample& base,
                            int n_quad) const override;

  const VectorField& field() const { return field_; }
  const std::vector<double>& times() const { return times_; }

 private:
  VectorField field_;
  std::vector<double> times_;
};

}  // namespace latentscope
