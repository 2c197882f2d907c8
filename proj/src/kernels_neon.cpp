// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

// NEON variants for aarch64 builds. float64x2 lanes; the bit-mask kernels
// stay scalar — at d <= 64 the byte-expand dance is not worth it there.

#include "crslearn/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace crslearn::kernels {

namespace {

double neon_dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

void neon_axpy(double alpha, const double* x, double* y, std::size_t n) {
  float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double neon_dot_bits(const std::uint8_t* bits, const double* w,
                     std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i]) acc += w[i];
  }
  return acc;
}

void neon_add_bits(double alpha, const std::uint8_t* bits, double* acc,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i]) acc[i] += alpha;
  }
}

double neon_sum(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

double neon_norm1(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += std::fabs(x[i]);
  return out;
}

double neon_norm2sq(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i] * x[i];
  return out;
}

void neon_soft_threshold(const double* x, double t, double* out,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    out[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
  }
}

const Ops kNeonOps = {
    "neon",        neon_dot,   neon_axpy,    neon_dot_bits,
    neon_add_bits, neon_sum,   neon_norm1,   neon_norm2sq,
    neon_soft_threshold,
};

}  // namespace

const Ops* neon_ops() { return &kNeonOps; }

}  // namespace crslearn::kernels

#endif  // __aarch64__
