// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#include "crslearn/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace crslearn::kernels {

namespace {

double scalar_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void scalar_axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double scalar_dot_bits(const std::uint8_t* bits, const double* w,
                       std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i]) acc += w[i];
  }
  return acc;
}

void scalar_add_bits(double alpha, const std::uint8_t* bits, double* acc,
                     std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i]) acc[i] += alpha;
  }
}

double scalar_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double scalar_norm1(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double scalar_norm2sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void scalar_soft_threshold(const double* x, double t, double* out,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    out[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
  }
}

const Ops kScalarOps = {
    "scalar",        scalar_dot,   scalar_axpy,    scalar_dot_bits,
    scalar_add_bits, scalar_sum,   scalar_norm1,   scalar_norm2sq,
    scalar_soft_threshold,
};

const Ops* pick_active() {
  const char* force = std::getenv("CRS_LEARN_SIMD");
  if (force && std::strcmp(force, "scalar") == 0) return &kScalarOps;
  for (const Ops* ops : available_ops()) {
    if (force) {
      if (std::strcmp(ops->name, force) == 0) return ops;
    }
  }
  // No (usable) override: last compiled-in variant the CPU supports wins;
  // available_ops() lists them in ascending preference.
  return available_ops().back();
}

}  // namespace

#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2_ops_if_supported();  // kernels_avx2.cpp
#endif
#if defined(__aarch64__)
const Ops* neon_ops();  // kernels_neon.cpp
#endif

const Ops& scalar_ops() { return kScalarOps; }

const std::vector<const Ops*>& available_ops() {
  static const std::vector<const Ops*> list = [] {
    std::vector<const Ops*> v{&kScalarOps};
#if defined(__x86_64__) || defined(_M_X64)
    if (const Ops* avx2 = avx2_ops_if_supported()) v.push_back(avx2);
#endif
#if defined(__aarch64__)
    if (const Ops* neon = neon_ops()) v.push_back(neon);
#endif
    return v;
  }();
  return list;
}

const Ops& active_ops() {
  static const Ops* active = pick_active();
  return *active;
}

}  // namespace crslearn::kernels
