#pragma once

#include <span>
#include <string>
#include <vector>

#include "latentscope/matrix.hpp"
#include "latentscope/mlp.hpp"
#include "latentscope/ncde.hpp"

namespace latentscope {

/// Integrated Jacobian for one (baseline, test) pair: j[s][i] is the
/// displacement-scaled path average of dz_s/dx_i along the joint straight
/// line from baseline to test. delta_z records the latent shift per row.
struct PairAttribution {
  Matrix j;                    // S x D
  std::vector<double> delta_z;  // S
  std::string baseline_id;
  std::string test_id;
  int n_quad = 0;
};

/// Per-row normalized impacts: p[s][i] = j[s][i] / |delta_z[s]|.
/// Rows with |delta_z| below the guard threshold are zeroed and flagged.
struct ImpactMatrix {
  Matrix p;  // S x D
  std::vector<std::uint8_t> guarded;
};

/// Composite-trapezoid integrated Jacobian of an MLP latent extractor
/// between baseline x_hat (lambda=0) and test x (lambda=1). Quadrature
/// nodes are the convex combinations (1-q/n)*x_hat + (q/n)*x, so swapping
/// the roles visits bit-identical points and negates j.
PairAttribution integrated_jacobian(const MlpSpec& model, std::span<const double> x,
                                    std::span<const double> x_hat, int n_quad);

/// NCDE variant for the latent state at knot t_index: each quadrature node
/// interpolates the two series, solves the CDE, and reads the state Jacobian
/// as the field matrix at that knot. Rows are the H latent states; the
/// displacement is taken at the same knot.
PairAttribution integrated_jacobian_ncde(const VectorField& field,
                                         std::span<const double> times,
                                         const Matrix& test_values, const Matrix& base_values,
                                         int t_index, int n_quad);

/// Full-grid NCDE attribution: rows are all (state, time) pairs,
/// row = state * T + time_index. One CDE solve per quadrature node covers
/// every knot.
PairAttribution attribute_ncde_trajectory(const VectorField& field,
                                          std::span<const double> times,
                                          const Matrix& test_values, const Matrix& base_values,
                                          int n_quad);

/// Full-grid attribution for an MLP applied independently at each time step.
PairAttribution attribute_mlp_per_step(const MlpSpec& model, const Matrix& test_values,
                                       const Matrix& base_values, int n_quad);

ImpactMatrix impact_measure(const PairAttribution& pa, double epsilon);

/// Per-feature Euclidean norm of j over all rows.
std::vector<double> projected_jacobian(const PairAttribution& pa);

}  // namespace latentscope
