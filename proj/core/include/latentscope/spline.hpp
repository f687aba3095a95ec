#pragma once

#include <span>
#include <vector>

#include "latentscope/matrix.hpp"

namespace latentscope {

/// Natural cubic interpolant of a multi-channel series over strictly
/// increasing knot times. C2 between knots, zero second derivative at the
/// endpoints, exact at the knots. Evaluation returns value and analytic
/// first derivative.
class ControlPath {
 public:
  ControlPath() = default;

  int knot_count() const { return static_cast<int>(times_.size()); }
  int channel_count() const { return values_.cols; }
  const std::vector<double>& knot_times() const { return times_; }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

  /// Value and derivative at t. Throws InputError when t is outside the knot span.
  void eval(double t, std::span<double> x, std::span<double> dx_dt) const;

  /// Same, with the containing segment already known; t is not range-checked
  /// beyond picking the segment formulas. Used by the CDE stepper whose step
  /// times are constructed inside one segment.
  void eval_segment(int segment, double t, std::span<double> x, std::span<double> dx_dt) const;

  /// Segment index whose [t_i, t_i+1] span contains t.
  int segment_of(double t) const;

  friend ControlPath fit_natural_cubic(std::span<const double> times, const Matrix& values);

 private:
  std::vector<double> times_;
  Matrix values_;   // T x D knot values
  Matrix second_;   // T x D second derivatives at knots
};

/// Fit one natural cubic per channel. values is T x D; times strictly increasing,
/// T >= 2. Two knots degenerate to the straight line.
ControlPath fit_natural_cubic(std::span<const double> times, const Matrix& values);

}  // namespace latentscope
