#include "latentscope/attribution.hpp"

#include <cmath>
#include <string>

#include "latentscope/errors.hpp"

namespace latentscope {

namespace {

void check_quad(int n_quad) {
  if (n_quad < 1) throw InputError("n_quad must be >= 1");
}

// Trapezoid weight for node q of 0..n.
double trap_weight(int q, int n) { return (q == 0 || q == n) ? 0.5 : 1.0; }

void check_finite(std::span<const double> z, const char* what) {
  for (double v : z) {
    if (!std::isfinite(v)) throw RuntimeFailure(std::string(what) + " produced a non-finite value");
  }
}

}  // namespace

PairAttribution integrated_jacobian(const MlpSpec& model, std::span<const double> x,
                                    std::span<const double> x_hat, int n_quad) {
  check_quad(n_quad);
  if (x.size() != x_hat.size()) {
    throw InputError("test and baseline dims disagree (" + std::to_string(x.size()) + " vs " +
                     std::to_string(x_hat.size()) + ")");
  }
  const int d = model.input_dim();
  const int h = model.output_dim();
  if (static_cast<int>(x.size()) != d) {
    throw InputError("pair has " + std::to_string(x.size()) + " features, model expects " +
                     std::to_string(d));
  }

  Matrix avg(h, d, 0.0);
  std::vector<double> point(d);
  for (int q = 0; q <= n_quad; ++q) {
    const double lam = static_cast<double>(q) / n_quad;
    const double lam_c = static_cast<double>(n_quad - q) / n_quad;
    for (int i = 0; i < d; ++i) point[i] = lam_c * x_hat[i] + lam * x[i];
    const Matrix jac = mlp_jacobian(model, point);
    const double w = trap_weight(q, n_quad);
    for (std::size_t k = 0; k < avg.data.size(); ++k) avg.data[k] += w * jac.data[k];
  }
  for (double& v : avg.data) v /= n_quad;

  PairAttribution pa;
  pa.n_quad = n_quad;
  pa.j = Matrix(h, d, 0.0);
  for (int s = 0; s < h; ++s) {
    for (int i = 0; i < d; ++i) pa.j.at(s, i) = (x[i] - x_hat[i]) * avg.at(s, i);
  }
  const std::vector<double> z = mlp_forward(model, x);
  const std::vector<double> z_hat = mlp_forward(model, x_hat);
  check_finite(z, "model forward");
  check_finite(z_hat, "model forward");
  pa.delta_z.resize(h);
  for (int s = 0; s < h; ++s) pa.delta_z[s] = z[s] - z_hat[s];
  return pa;
}

namespace {

// Shared core of the NCDE attributions: trapezoid-average the field matrix
// along the interpolation between two series at the requested knots.
PairAttribution ncde_attribution(const VectorField& field, std::span<const double> times,
                                 const Matrix& test_values, const Matrix& base_values,
                                 std::span<const int> knots, int n_quad) {
  check_quad(n_quad);
  if (!test_values.same_shape(base_values)) {
    throw InputError("test and baseline series shapes disagree");
  }
  if (static_cast<int>(times.size()) != test_values.rows) {
    throw InputError("series has " + std::to_string(test_values.rows) + " rows, " +
                     std::to_string(times.size()) + " knot times");
  }
  if (test_values.cols != field.input_dim) {
    throw InputError("series has " + std::to_string(test_values.cols) +
                     " features, vector field expects " + std::to_string(field.input_dim));
  }

  const int h = field.latent_dim;
  const int d = field.input_dim;
  const int n_rows = static_cast<int>(knots.size()) * h;
  const double t_first = times.front();
  const double t_last = times.back();
  const std::vector<double> z_init = field.initial_state();

  Matrix avg(n_rows, d, 0.0);
  Matrix base_states, test_states;
  Matrix interp(test_values.rows, test_values.cols, 0.0);
  for (int q = 0; q <= n_quad; ++q) {
    const double lam = static_cast<double>(q) / n_quad;
    const double lam_c = static_cast<double>(n_quad - q) / n_quad;
    for (std::size_t k = 0; k < interp.data.size(); ++k) {
      interp.data[k] = lam_c * base_values.data[k] + lam * test_values.data[k];
    }
    const ControlPath path = fit_natural_cubic(times, interp);
    const LatentTrajectory traj = solve_cde(field, path, z_init, field.steps_per_interval);
    const double w = trap_weight(q, n_quad);
    for (std::size_t ki = 0; ki < knots.size(); ++ki) {
      const int n = knots[ki];
      const Matrix f = field.eval(
          std::span<const double>(traj.states.row(n), static_cast<std::size_t>(h)),
          normalize_time(times[n], t_first, t_last));
      for (int s = 0; s < h; ++s) {
        double* ar = avg.row(s * static_cast<int>(knots.size()) + static_cast<int>(ki));
        const double* fr = f.row(s);
        for (int i = 0; i < d; ++i) ar[i] += w * fr[i];
      }
    }
    if (q == 0) base_states = traj.states;
    if (q == n_quad) test_states = traj.states;
  }
  for (double& v : avg.data) v /= n_quad;

  PairAttribution pa;
  pa.n_quad = n_quad;
  pa.j = Matrix(n_rows, d, 0.0);
  pa.delta_z.resize(n_rows);
  for (int s = 0; s < h; ++s) {
    for (std::size_t ki = 0; ki < knots.size(); ++ki) {
      const int n = knots[ki];
      const int row = s * static_cast<int>(knots.size()) + static_cast<int>(ki);
      for (int i = 0; i < d; ++i) {
        pa.j.at(row, i) = (test_values.at(n, i) - base_values.at(n, i)) * avg.at(row, i);
      }
      pa.delta_z[row] = test_states.at(n, s) - base_states.at(n, s);
    }
  }
  return pa;
}

}  // namespace

PairAttribution integrated_jacobian_ncde(const VectorField& field,
                                         std::span<const double> times,
                                         const Matrix& test_values, const Matrix& base_values,
                                         int t_index, int n_quad) {
  if (t_index < 0 || t_index >= test_values.rows) {
    throw InputError("t_index " + std::to_string(t_index) + " outside 0.." +
                     std::to_string(test_values.rows - 1));
  }
  const int knots[1] = {t_index};
  return ncde_attribution(field, times, test_values, base_values, knots, n_quad);
}

PairAttribution attribute_ncde_trajectory(const VectorField& field,
                                          std::span<const double> times,
                                          const Matrix& test_values, const Matrix& base_values,
                                          int n_quad) {
  std::vector<int> knots(test_values.rows);
  for (int n = 0; n < test_values.rows; ++n) knots[n] = n;
  return ncde_attribution(field, times, test_values, base_values, knots, n_quad);
}

PairAttribution attribute_mlp_per_step(const MlpSpec& model, const Matrix& test_values,
                                       const Matrix& base_values, int n_quad) {
  check_quad(n_quad);
  if (!test_values.same_shape(base_values)) {
    throw InputError("test and baseline series shapes disagree");
  }
  if (test_values.cols != model.input_dim()) {
    throw InputError("series has " + std::to_string(test_values.cols) +
                     " features, model expects " + std::to_string(model.input_dim()));
  }
  const int t_steps = test_values.rows;
  const int h = model.output_dim();
  const int d = model.input_dim();

  PairAttribution pa;
  pa.n_quad = n_quad;
  pa.j = Matrix(h * t_steps, d, 0.0);
  pa.delta_z.assign(static_cast<std::size_t>(h) * t_steps, 0.0);

  std::vector<double> test_row(d), base_row(d);
  for (int n = 0; n < t_steps; ++n) {
    for (int i = 0; i < d; ++i) {
      test_row[i] = test_values.at(n, i);
      base_row[i] = base_values.at(n, i);
    }
    const PairAttribution step = integrated_jacobian(model, test_row, base_row, n_quad);
    for (int s = 0; s < h; ++s) {
      const int row = s * t_steps + n;
      for (int i = 0; i < d; ++i) pa.j.at(row, i) = step.j.at(s, i);
      pa.delta_z[row] = step.delta_z[s];
    }
  }
  return pa;
}

ImpactMatrix impact_measure(const PairAttribution& pa, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be > 0");
  ImpactMatrix im;
  im.p = Matrix(pa.j.rows, pa.j.cols, 0.0);
  im.guarded.assign(pa.j.rows, 0);
  for (int s = 0; s < pa.j.rows; ++s) {
    const double mag = std::fabs(pa.delta_z[s]);
    if (mag < epsilon) {
      im.guarded[s] = 1;
      continue;  // degenerate shift: zero row
    }
    for (int i = 0; i < pa.j.cols; ++i) im.p.at(s, i) = pa.j.at(s, i) / mag;
  }
  return im;
}

std::vector<double> projected_jacobian(const PairAttribution& pa) {
  std::vector<double> out(pa.j.cols, 0.0);
  for (int i = 0; i < pa.j.cols; ++i) {
    double acc = 0.0;
    for (int s = 0; s < pa.j.rows; ++s) {
      const double v = pa.j.at(s, i);
      acc += v * v;
    }
    out[i] = std::sqrt(acc);
  }
  return out;
}

}  // namespace latentscope
