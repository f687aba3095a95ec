#include "latentscope/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "latentscope/errors.hpp"
#include "latentscope/rng.hpp"

namespace latentscope {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw InputError("unknown activation '" + name + "'");
}

namespace {

double apply_act(Activation a, double v) {
  switch (a) {
    case Activation::kTanh: return std::tanh(v);
    case Activation::kRelu: return v > 0.0 ? v : 0.0;
    case Activation::kIdentity: return v;
  }
  return v;
}

// Derivative given the pre-activation value. relu at 0 uses subgradient 0.
double act_derivative(Activation a, double pre) {
  switch (a) {
    case Activation::kTanh: {
      const double t = std::tanh(pre);
      return 1.0 - t * t;
    }
    case Activation::kRelu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::kIdentity: return 1.0;
  }
  return 1.0;
}

void check_input_dim(const MlpSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.input_dim()) {
    throw InputError("mlp input has " + std::to_string(x.size()) + " entries, expected " +
                     std::to_string(spec.input_dim()));
  }
}

}  // namespace

void MlpSpec::validate() const {
  if (layer_dims.size() < 2) throw InputError("mlp needs at least two layer_dims");
  const std::size_t n = layer_dims.size() - 1;
  if (weights.size() != n || biases.size() != n || activations.size() != n) {
    throw InputError("mlp layer counts disagree: " + std::to_string(layer_dims.size()) +
                     " dims vs " + std::to_string(weights.size()) + " weights, " +
                     std::to_string(biases.size()) + " biases, " +
                     std::to_string(activations.size()) + " activations");
  }
  for (std::size_t l = 0; l < n; ++l) {
    if (layer_dims[l] <= 0) throw InputError("mlp layer_dims must be positive");
    const int in = layer_dims[l];
    const int out = layer_dims[l + 1];
    if (weights[l].rows != out || weights[l].cols != in) {
      throw InputError("mlp weight matrix " + std::to_string(l) + " is " +
                       std::to_string(weights[l].rows) + "x" + std::to_string(weights[l].cols) +
                       ", expected " + std::to_string(out) + "x" + std::to_string(in));
    }
    if (static_cast<int>(biases[l].size()) != out) {
      throw InputError("mlp bias " + std::to_string(l) + " has " +
                       std::to_string(biases[l].size()) + " entries, expected " +
                       std::to_string(out));
    }
    for (double w : weights[l].data) {
      if (!std::isfinite(w)) throw InputError("mlp weights must be finite");
    }
    for (double b : biases[l]) {
      if (!std::isfinite(b)) throw InputError("mlp biases must be finite");
    }
  }
  if (layer_dims.back() <= 0) throw InputError("mlp layer_dims must be positive");
}

std::vector<double> mlp_forward(const MlpSpec& spec, std::span<const double> x) {
  check_input_dim(spec, x);
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> next;
  for (int l = 0; l < spec.layer_count(); ++l) {
    const Matrix& W = spec.weights[l];
    next.assign(W.rows, 0.0);
    for (int r = 0; r < W.rows; ++r) {
      double acc = spec.biases[l][r];
      const double* wr = W.row(r);
      for (int c = 0; c < W.cols; ++c) acc += wr[c] * a[c];
      next[r] = apply_act(spec.activations[l], acc);
    }
    a.swap(next);
  }
  return a;
}

Matrix mlp_jacobian(const MlpSpec& spec, std::span<const double> x) {
  check_input_dim(spec, x);
  const int d = spec.input_dim();

  std::vector<double> a(x.begin(), x.end());
  // tangent: one row per current unit, one column per input coordinate
  Matrix tangent(d, d, 0.0);
  for (int i = 0; i < d; ++i) tangent.at(i, i) = 1.0;

  std::vector<double> pre;
  Matrix next_tangent;
  std::vector<double> next_a;
  for (int l = 0; l < spec.layer_count(); ++l) {
    const Matrix& W = spec.weights[l];
    pre.assign(W.rows, 0.0);
    next_tangent = Matrix(W.rows, d, 0.0);
    for (int r = 0; r < W.rows; ++r) {
      double acc = spec.biases[l][r];
      const double* wr = W.row(r);
      double* tr = next_tangent.row(r);
      for (int c = 0; c < W.cols; ++c) {
        const double w = wr[c];
        acc += w * a[c];
        const double* tc = tangent.row(c);
        for (int i = 0; i < d; ++i) tr[i] += w * tc[i];
      }
      pre[r] = acc;
    }
    next_a.assign(W.rows, 0.0);
    for (int r = 0; r < W.rows; ++r) {
      const double g = act_derivative(spec.activations[l], pre[r]);
      double* tr = next_tangent.row(r);
      for (int i = 0; i < d; ++i) tr[i] *= g;
      next_a[r] = apply_act(spec.activations[l], pre[r]);
    }
    a.swap(next_a);
    tangent = std::move(next_tangent);
  }
  return tangent;
}

Matrix mlp_jacobian_fd(const MlpSpec& spec, std::span<const double> x, double step) {
  check_input_dim(spec, x);
  if (!(step > 0.0)) throw InputError("finite-difference step must be > 0");
  const int d = spec.input_dim();
  const int h = spec.output_dim();
  Matrix jac(h, d, 0.0);
  std::vector<double> xp(x.begin(), x.end());
  for (int i = 0; i < d; ++i) {
    const double xi = xp[i];
    xp[i] = xi + step;
    const std::vector<double> zp = mlp_forward(spec, xp);
    xp[i] = xi - step;
    const std::vector<double> zm = mlp_forward(spec, xp);
    xp[i] = xi;
    for (int s = 0; s < h; ++s) jac.at(s, i) = (zp[s] - zm[s]) / (2.0 * step);
  }
  return jac;
}

MlpSpec make_random_tanh_mlp(const std::vector<int>& layer_dims, std::uint64_t seed,
                             double scale) {
  MlpSpec spec;
  spec.layer_dims = layer_dims;
  SplitMix64 rng(seed);
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const int in = layer_dims[l];
    const int out = layer_dims[l + 1];
    const double bound = scale / std::sqrt(static_cast<double>(in));
    Matrix w(out, in);
    for (double& v : w.data) v = rng.uniform(-bound, bound);
    std::vector<double> b(out);
    for (double& v : b) v = rng.uniform(-0.1, 0.1);
    spec.weights.push_back(std::move(w));
    spec.biases.push_back(std::move(b));
    const bool last = (l + 2 == layer_dims.size());
    spec.activations.push_back(last ? Activation::kIdentity : Activation::kTanh);
  }
  spec.validate();
  return spec;
}

}  // namespace latentscope
