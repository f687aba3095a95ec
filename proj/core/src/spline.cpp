#include "latentscope/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latentscope/errors.hpp"

namespace latentscope {

ControlPath fit_natural_cubic(std::span<const double> times, const Matrix& values) {
  const int n = static_cast<int>(times.size());
  if (n < 2) throw InputError("control path needs at least two knots");
  if (values.rows != n) {
    throw InputError("knot value rows (" + std::to_string(values.rows) +
                     ") do not match knot times (" + std::to_string(n) + ")");
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (!(times[i] < times[i + 1])) {
      throw InputError("knot times must be strictly increasing (violated at index " +
                       std::to_string(i + 1) + ")");
    }
  }

  ControlPath path;
  path.times_.assign(times.begin(), times.end());
  path.values_ = values;
  path.second_ = Matrix(n, values.cols, 0.0);

  if (n == 2) return path;  // natural boundary => linear, second derivatives stay 0

  // Tridiagonal system for interior second derivatives, natural boundary
  // M_0 = M_{n-1} = 0. Solved per channel with the Thomas algorithm.
  const int m = n - 2;
  std::vector<double> diag(m), upper(m), rhs(m);
  for (int ch = 0; ch < values.cols; ++ch) {
    for (int i = 0; i < m; ++i) {
      const double h0 = times[i + 1] - times[i];
      const double h1 = times[i + 2] - times[i + 1];
      diag[i] = (h0 + h1) / 3.0;
      upper[i] = h1 / 6.0;
      rhs[i] = (values.at(i + 2, ch) - values.at(i + 1, ch)) / h1 -
               (values.at(i + 1, ch) - values.at(i, ch)) / h0;
    }
    // forward sweep; sub-diagonal equals the upper of the previous row
    for (int i = 1; i < m; ++i) {
      const double w = upper[i - 1] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    double prev = 0.0;
    for (int i = m - 1; i >= 0; --i) {
      prev = (rhs[i] - upper[i] * prev) / diag[i];
      path.second_.at(i + 1, ch) = prev;
    }
  }
  return path;
}

int ControlPath::segment_of(double t) const {
  const int n = knot_count();
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  int seg = static_cast<int>(it - times_.begin()) - 1;
  if (seg < 0) seg = 0;
  if (seg > n - 2) seg = n - 2;
  return seg;
}

void ControlPath::eval(double t, std::span<double> x, std::span<double> dx_dt) const {
  if (t < t_begin() || t > t_end()) {
    throw InputError("path evaluated at t=" + std::to_string(t) + " outside [" +
                     std::to_string(t_begin()) + ", " + std::to_string(t_end()) + "]");
  }
  eval_segment(segment_of(t), t, x, dx_dt);
}

void ControlPath::eval_segment(int segment, double t, std::span<double> x,
                               std::span<double> dx_dt) const {
  const double t0 = times_[segment];
  const double t1 = times_[segment + 1];
  const double h = t1 - t0;
  const double a = t1 - t;
  const double b = t - t0;
  const int knot_hit = (t == t0) ? segment : (t == t1) ? segment + 1 : -1;
  for (int ch = 0; ch < values_.cols; ++ch) {
    const double y0 = values_.at(segment, ch);
    const double y1 = values_.at(segment + 1, ch);
    const double m0 = second_.at(segment, ch);
    const double m1 = second_.at(segment + 1, ch);
    // knot values reproduce bit-exactly; the cubic form only cancels to roundoff
    x[ch] = knot_hit >= 0 ? values_.at(knot_hit, ch)
                          : m0 * a * a * a / (6.0 * h) + m1 * b * b * b / (6.0 * h) +
                                (y0 - m0 * h * h / 6.0) * a / h +
                                (y1 - m1 * h * h / 6.0) * b / h;
    dx_dt[ch] = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) + (y1 - y0) / h -
                (m1 - m0) * h / 6.0;
  }
}

}  // namespace latentscope
