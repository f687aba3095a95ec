#include "latentscope/ncde.hpp"

#include <cmath>
#include <string>

#include "latentscope/errors.hpp"

namespace latentscope {

void VectorField::validate() const {
  mlp.validate();
  if (latent_dim <= 0 || input_dim <= 0) {
    throw InputError("vector field dims must be positive (H=" + std::to_string(latent_dim) +
                     ", D=" + std::to_string(input_dim) + ")");
  }
  if (mlp.input_dim() != latent_dim + 1) {
    throw InputError("vector field mlp input dim " + std::to_string(mlp.input_dim()) +
                     " != H+1 = " + std::to_string(latent_dim + 1));
  }
  if (mlp.output_dim() != latent_dim * input_dim) {
    throw InputError("vector field mlp output dim " + std::to_string(mlp.output_dim()) +
                     " != H*D = " + std::to_string(latent_dim * input_dim));
  }
  if (!z0.empty() && static_cast<int>(z0.size()) != latent_dim) {
    throw InputError("vector field z0 has " + std::to_string(z0.size()) +
                     " entries, expected " + std::to_string(latent_dim));
  }
  if (steps_per_interval < 1) throw InputError("steps_per_interval must be >= 1");
}

Matrix VectorField::eval(std::span<const double> z, double t_norm) const {
  if (static_cast<int>(z.size()) != latent_dim) {
    throw InputError("vector field latent input has " + std::to_string(z.size()) +
                     " entries, expected " + std::to_string(latent_dim));
  }
  std::vector<double> in(z.begin(), z.end());
  in.push_back(t_norm);
  const std::vector<double> out = mlp_forward(mlp, in);
  Matrix f(latent_dim, input_dim, 0.0);
  f.data.assign(out.begin(), out.end());
  return f;
}

Matrix ncde_state_jacobian(const VectorField& field, std::span<const double> z, double t_norm) {
  return field.eval(z, t_norm);
}

double normalize_time(double t, double t_first, double t_last) {
  const double span = t_last - t_first;
  return span > 0.0 ? (t - t_first) / span : 0.0;
}

namespace {

// dz/dt at (z, t): field matrix times path derivative.
void cde_rhs(const VectorField& field, const ControlPath& path, int segment, double t,
             double t_first, double t_last, std::span<const double> z,
             std::vector<double>& x_buf, std::vector<double>& dx_buf,
             std::vector<double>& out) {
  path.eval_segment(segment, t, x_buf, dx_buf);
  const Matrix f = field.eval(z, normalize_time(t, t_first, t_last));
  const int h = field.latent_dim;
  const int d = field.input_dim;
  out.assign(h, 0.0);
  for (int s = 0; s < h; ++s) {
    double acc = 0.0;
    const double* fr = f.row(s);
    for (int i = 0; i < d; ++i) acc += fr[i] * dx_buf[i];
    out[s] = acc;
  }
}

}  // namespace

LatentTrajectory solve_cde(const VectorField& field, const ControlPath& path,
                           std::span<const double> z0, int n_steps_per_interval) {
  field.validate();
  if (n_steps_per_interval < 1) throw InputError("n_steps_per_interval must be >= 1");
  if (path.channel_count() != field.input_dim) {
    throw InputError("path has " + std::to_string(path.channel_count()) +
                     " channels, vector field expects " + std::to_string(field.input_dim));
  }
  if (static_cast<int>(z0.size()) != field.latent_dim) {
    throw InputError("z0 has " + std::to_string(z0.size()) + " entries, expected " +
                     std::to_string(field.latent_dim));
  }

  const int n_knots = path.knot_count();
  const int h = field.latent_dim;
  const int d = field.input_dim;
  const double t_first = path.t_begin();
  const double t_last = path.t_end();

  LatentTrajectory traj;
  traj.times = path.knot_times();
  traj.states = Matrix(n_knots, h, 0.0);

  std::vector<double> z(z0.begin(), z0.end());
  for (int s = 0; s < h; ++s) traj.states.at(0, s) = z[s];

  std::vector<double> x_buf(d), dx_buf(d);
  std::vector<double> k1, k2, k3, k4;
  std::vector<double> zt(h);

  for (int seg = 0; seg + 1 < n_knots; ++seg) {
    const double ta = traj.times[seg];
    const double tb = traj.times[seg + 1];
    const double step = (tb - ta) / n_steps_per_interval;
    for (int i = 0; i < n_steps_per_interval; ++i) {
      const double t0 = ta + i * step;
      const double tm = ta + (i + 0.5) * step;
      const double t1 = (i + 1 == n_steps_per_interval) ? tb : ta + (i + 1) * step;

      cde_rhs(field, path, seg, t0, t_first, t_last, z, x_buf, dx_buf, k1);
      for (int s = 0; s < h; ++s) zt[s] = z[s] + 0.5 * step * k1[s];
      cde_rhs(field, path, seg, tm, t_first, t_last, zt, x_buf, dx_buf, k2);
      for (int s = 0; s < h; ++s) zt[s] = z[s] + 0.5 * step * k2[s];
      cde_rhs(field, path, seg, tm, t_first, t_last, zt, x_buf, dx_buf, k3);
      for (int s = 0; s < h; ++s) zt[s] = z[s] + step * k3[s];
      cde_rhs(field, path, seg, t1, t_first, t_last, zt, x_buf, dx_buf, k4);

      for (int s = 0; s < h; ++s) {
        z[s] += step / 6.0 * (k1[s] + 2.0 * (k2[s] + k3[s]) + k4[s]);
      }
    }
    for (int s = 0; s < h; ++s) {
      if (!std::isfinite(z[s])) {
        throw RuntimeFailure("CDE state became non-finite while integrating interval [" +
                             std::to_string(ta) + ", " + std::to_string(tb) + "] (knots " +
                             std::to_string(seg) + ".." + std::to_string(seg + 1) + ")");
      }
      traj.states.at(seg + 1, s) = z[s];
    }
  }
  return traj;
}

}  // namespace latentscope
