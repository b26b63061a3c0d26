#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "trajmoment/matrix.hpp"

// GEMM kernels behind the model's forward/backward passes. Each operation has
// a serial twin used as the reference in tests and benchmarks. The parallel
// versions split work across output rows only, so each output element is
// accumulated in the same order as in the serial code and results are
// bit-identical for any thread count.

namespace trajmoment::kernels {

namespace detail {

template <typename S>
inline void nn_row(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, std::size_t i) {
  S* crow = c.row(i);
  const S* arow = a.row(i);
  for (std::size_t k = 0; k < a.cols; ++k) {
    const S av = arow[k];
    const S* brow = b.row(k);
    for (std::size_t j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
  }
}

template <typename S>
inline void nt_row(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, std::size_t i) {
  S* crow = c.row(i);
  const S* arow = a.row(i);
  for (std::size_t j = 0; j < b.rows; ++j) {
    const S* brow = b.row(j);
    S acc = 0;
    for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
    crow[j] += acc;
  }
}

template <typename S>
inline void tn_row(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, std::size_t i) {
  S* crow = c.row(i);
  for (std::size_t k = 0; k < a.rows; ++k) {
    const S av = a.at(k, i);
    const S* brow = b.row(k);
    for (std::size_t j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
  }
}

inline bool use_parallel(std::size_t rows, std::size_t work_per_row) {
#ifdef _OPENMP
  return rows > 1 && rows * work_per_row >= 32768 && !omp_in_parallel();
#else
  (void)rows;
  (void)work_per_row;
  return false;
#endif
}

}  // namespace detail

// c (+)= a * b, a: m x k, b: k x n.
template <typename S>
void gemm_nn_serial(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, bool accumulate = false) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols)
    throw Error(ErrorCode::DimensionMismatch, "gemm_nn shape");
  if (!accumulate) c.fill(S(0));
  for (std::size_t i = 0; i < a.rows; ++i) detail::nn_row(a, b, c, i);
}

template <typename S>
void gemm_nn(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, bool accumulate = false) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols)
    throw Error(ErrorCode::DimensionMismatch, "gemm_nn shape");
  if (!accumulate) c.fill(S(0));
  if (!detail::use_parallel(a.rows, a.cols * b.cols)) {
    for (std::size_t i = 0; i < a.rows; ++i) detail::nn_row(a, b, c, i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)a.rows; ++i) detail::nn_row(a, b, c, (std::size_t)i);
}

// c (+)= a * b^T, a: m x k, b: n x k.
template <typename S>
void gemm_nt_serial(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, bool accumulate = false) {
  if (a.cols != b.cols || c.rows != a.rows || c.cols != b.rows)
    throw Error(ErrorCode::DimensionMismatch, "gemm_nt shape");
  if (!accumulate) c.fill(S(0));
  for (std::size_t i = 0; i < a.rows; ++i) detail::nt_row(a, b, c, i);
}

template <typename S>
void gemm_nt(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, bool accumulate = false) {
  if (a.cols != b.cols || c.rows != a.rows || c.cols != b.rows)
    throw Error(ErrorCode::DimensionMismatch, "gemm_nt shape");
  if (!accumulate) c.fill(S(0));
  if (!detail::use_parallel(a.rows, a.cols * b.rows)) {
    for (std::size_t i = 0; i < a.rows; ++i) detail::nt_row(a, b, c, i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)a.rows; ++i) detail::nt_row(a, b, c, (std::size_t)i);
}

// c (+)= a^T * b, a: k x m, b: k x n.
template <typename S>
void gemm_tn_serial(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, bool accumulate = false) {
  if (a.rows != b.rows || c.rows != a.cols || c.cols != b.cols)
    throw Error(ErrorCode::DimensionMismatch, "gemm_tn shape");
  if (!accumulate) c.fill(S(0));
  for (std::size_t i = 0; i < a.cols; ++i) detail::tn_row(a, b, c, i);
}

template <typename S>
void gemm_tn(const Mat<S>& a, const Mat<S>& b, Mat<S>& c, bool accumulate = false) {
  if (a.rows != b.rows || c.rows != a.cols || c.cols != b.cols)
    throw Error(ErrorCode::DimensionMismatch, "gemm_tn shape");
  if (!accumulate) c.fill(S(0));
  if (!detail::use_parallel(a.cols, a.rows * b.cols)) {
    for (std::size_t i = 0; i < a.cols; ++i) detail::tn_row(a, b, c, i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)a.cols; ++i) detail::tn_row(a, b, c, (std::size_t)i);
}

}  // namespace trajmoment::kernels
