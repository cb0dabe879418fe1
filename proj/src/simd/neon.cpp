// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

// NEON is baseline on AArch64, so no runtime feature check is needed.

#include <arm_neon.h>

#include <cmath>

#include "rieszlab/simd/dispatch.hpp"

namespace rieszlab::simd::detail {
namespace {

inline double hsum(float64x2_t lo, float64x2_t hi) {
  return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
         (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = hsum(acc0, acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_neon(const double* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
  }
  double acc = hsum(acc0, acc1);
  for (; i < n; ++i) acc += a[i];
  return acc;
}

double sum_abs_neon(const double* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vabsq_f64(vld1q_f64(a + i)));
    acc1 = vaddq_f64(acc1, vabsq_f64(vld1q_f64(a + i + 2)));
  }
  double acc = hsum(acc0, acc1);
  for (; i < n; ++i) acc += std::fabs(a[i]);
  return acc;
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{dot_neon, sum_neon, sum_abs_neon};
  return table;
}

}  // namespace rieszlab::simd::detail
