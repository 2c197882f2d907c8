// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace crslearn::kernels {

// Arithmetic inner loops shared by the scorer, the linear trainers and the
// evaluator. Every kernel has a scalar reference implementation and, where
// the target supports it, a SIMD variant selected once at runtime. Feature
// rows are unpacked 0/1 bytes (d <= 64 for the SQLi rule family), weight
// and gradient vectors are doubles.
struct Ops {
  const char* name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_i w[i] over i with bits[i] != 0
  double (*dot_bits)(const std::uint8_t* bits, const double* w, std::size_t n);
  // acc[i] += alpha over i with bits[i] != 0
  void (*add_bits)(double alpha, const std::uint8_t* bits, double* acc,
                   std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*norm1)(const double* x, std::size_t n);
  double (*norm2sq)(const double* x, std::size_t n);
  // out[i] = sign(x[i]) * max(|x[i]| - t, 0); exact zeros, never residue
  void (*soft_threshold)(const double* x, double t, double* out,
                         std::size_t n);
};

const Ops& scalar_ops();

// Every variant compiled into this binary, scalar first. The equivalence
// suite runs each against the scalar reference.
const std::vector<const Ops*>& available_ops();

// Best supported variant, resolved once. CRS_LEARN_SIMD=scalar|avx2|neon
// forces a choice (falling back to scalar when unsupported).
const Ops& active_ops();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active_ops().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_ops().axpy(alpha, x, y, n);
}
inline double dot_bits(const std::uint8_t* bits, const double* w,
                       std::size_t n) {
  return active_ops().dot_bits(bits, w, n);
}
inline void add_bits(double alpha, const std::uint8_t* bits, double* acc,
                     std::size_t n) {
  active_ops().add_bits(alpha, bits, acc, n);
}
inline double sum(const double* x, std::size_t n) {
  return active_ops().sum(x, n);
}
inline double norm1(const double* x, std::size_t n) {
  return active_ops().norm1(x, n);
}
inline double norm2sq(const double* x, std::size_t n) {
  return active_ops().norm2sq(x, n);
}
inline void soft_threshold(const double* x, double t, double* out,
                           std::size_t n) {
  active_ops().soft_threshold(x, t, out, n);
}

}  // namespace crslearn::kernels
