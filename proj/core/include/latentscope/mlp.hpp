#pragma once

#include <span>
#include <string>
#include <vector>

#include "latentscope/matrix.hpp"

namespace latentscope {

enum class Activation { kTanh, kRelu, kIdentity };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Feed-forward network: layer_dims = [D, h1, ..., H], one weight matrix,
/// bias vector and activation per transition. Weights are row-major
/// (out_dim x in_dim). Evaluation is pure and bit-deterministic.
struct MlpSpec {
  std::vector<int> layer_dims;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  std::vector<Activation> activations;

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  int layer_count() const { return static_cast<int>(weights.size()); }

  /// Throws InputError on inconsistent shapes or non-finite parameters.
  void validate() const;
};

std::vector<double> mlp_forward(const MlpSpec& spec, std::span<const double> x);

/// Exact Jacobian dz/dx (H x D) by propagating one unit tangent per input
/// coordinate through the network. relu uses subgradient 0 at the kink.
Matrix mlp_jacobian(const MlpSpec& spec, std::span<const double> x);

/// Central-difference oracle: column i = (z(x+h e_i) - z(x-h e_i)) / (2h).
Matrix mlp_jacobian_fd(const MlpSpec& spec, std::span<const double> x, double step);

/// Random tanh MLP with uniform weights in [-scale/sqrt(fan_in), +scale/sqrt(fan_in)].
MlpSpec make_random_tanh_mlp(const std::vector<int>& layer_dims, std::uint64_t seed,
                             double scale = 1.0);

}  // namespace latentscope
