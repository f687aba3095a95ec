#pragma once

#include <span>
#include <vector>

#include "latentscope/matrix.hpp"
#include "latentscope/mlp.hpp"
#include "latentscope/spline.hpp"

namespace latentscope {

/// Neural CDE vector field: an MLP mapping [z (H entries); normalized time]
/// to H*D outputs read row-major as an H x D matrix.
struct VectorField {
  MlpSpec mlp;
  int latent_dim = 0;  // H
  int input_dim = 0;   // D
  std::vector<double> z0;       // initial latent state; zeros when empty
  int steps_per_interval = 16;  // fixed-step RK4 resolution

  void validate() const;

  /// Field matrix at (z, normalized t). One forward pass, reshaped.
  Matrix eval(std::span<const double> z, double t_norm) const;

  std::vector<double> initial_state() const {
    return z0.empty() ? std::vector<double>(latent_dim, 0.0) : z0;
  }
};

/// Latent states recorded at every knot of the driving path.
struct LatentTrajectory {
  std::vector<double> times;
  Matrix states;  // T x H
};

/// Integrate dz/dt = field(z, t_norm) * dx/dt with classical RK4,
/// n_steps_per_interval fixed steps per knot interval. Time entering the
/// field is min-max normalized to [0,1] over the path's knot span.
/// Throws RuntimeFailure naming the interval if the state leaves the finite range.
LatentTrajectory solve_cde(const VectorField& field, const ControlPath& path,
                           std::span<const double> z0, int n_steps_per_interval);

/// dz(t)/dx(t) for a CDE driven by its own observations: the field matrix
/// itself. Bit-identical to VectorField::eval; no differentiation involved.
Matrix ncde_state_jacobian(const VectorField& field, std::span<const double> z, double t_norm);

/// Normalized time for knot times: maps [front, back] onto [0, 1].
double normalize_time(double t, double t_first, double t_last);

}  // namespace latentscope
