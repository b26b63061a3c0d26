#pragma once

#include <cstddef>
#include <vector>

#include "trajmoment/error.hpp"

namespace trajmoment {

// Dense row-major matrix. Vectors are represented as 1 x n matrices so the
// optimizer and checkpoint code can treat every parameter uniformly.
template <typename Scalar>
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Scalar> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, Scalar fill = Scalar(0))
      : rows(r), cols(c), data(r * c, fill) {}

  Scalar* row(std::size_t i) { return data.data() + i * cols; }
  const Scalar* row(std::size_t i) const { return data.data() + i * cols; }

  Scalar& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Scalar at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }

  void fill(Scalar v) { std::fill(data.begin(), data.end(), v); }

  bool same_shape(const Mat& other) const {
    return rows == other.rows && cols == other.cols;
  }

  bool operator==(const Mat& other) const {
    return rows == other.rows && cols == other.cols && data == other.data;
  }

  template <typename Other>
  Mat<Other> cast() const {
    Mat<Other> out(rows, cols);
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<Other>(data[i]);
    return out;
  }
};

using MatF = Mat<float>;
using MatD = Mat<double>;

template <typename Scalar>
inline void require_shape(const Mat<Scalar>& m, std::size_t rows, std::size_t cols,
                          const char* what) {
  if (m.rows != rows || m.cols != cols) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " expected " + std::to_string(rows) + "x" +
                    std::to_string(cols) + ", got " + std::to_string(m.rows) + "x" +
                    std::to_string(m.cols));
  }
}

}  // namespace trajmoment
