#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace latentscope {

/// Dense row-major matrix of doubles.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }

  std::span<const double> row_span(int r) const {
    return {row(r), static_cast<std::size_t>(cols)};
  }
  std::span<double> row_span(int r) { return {row(r), static_cast<std::size_t>(cols)}; }

  bool same_shape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

/// Dense row-major matrix of counts.
struct CountMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> data;

  CountMatrix() = default;
  CountMatrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

  std::int64_t& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::int64_t at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  std::int64_t row_sum(int r) const {
    std::int64_t s = 0;
    for (int c = 0; c < cols; ++c) s += at(r, c);
    return s;
  }

  bool same_shape(const CountMatrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

}  // namespace latentscope
