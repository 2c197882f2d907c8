// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

// AVX2 + FMA variants of the arithmetic kernels. This translation unit is
// built with -mavx2 -mfma; callers reach it only through the runtime
// dispatch table, so the rest of the binary stays baseline x86-64.

#include "crslearn/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace crslearn::kernels {

namespace {

inline double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

// Expands 4 bytes of 0/1 flags into a 4-lane all-ones/all-zeros double mask.
inline __m256d bitmask4(const std::uint8_t* bits) {
  __m128i b = _mm_cvtsi32_si128(*reinterpret_cast<const int*>(bits));
  __m128i nz = _mm_cmpgt_epi8(b, _mm_setzero_si128());
  return _mm256_castsi256_pd(_mm256_cvtepi8_epi64(nz));
}

double avx2_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum256(_mm256_add_pd(acc0, acc1)) + tail;
}

void avx2_axpy(double alpha, const double* x, double* y, std::size_t n) {
  // mul+add (not fmadd): element-wise kernels stay bit-identical to the
  // scalar reference; only reductions are allowed to reassociate
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double avx2_dot_bits(const std::uint8_t* bits, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d masked = _mm256_and_pd(_mm256_loadu_pd(w + i), bitmask4(bits + i));
    acc = _mm256_add_pd(acc, masked);
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    if (bits[i]) tail += w[i];
  }
  return hsum256(acc) + tail;
}

void avx2_add_bits(double alpha, const std::uint8_t* bits, double* acc,
                   std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d inc = _mm256_and_pd(va, bitmask4(bits + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), inc));
  }
  for (; i < n; ++i) {
    if (bits[i]) acc[i] += alpha;
  }
}

double avx2_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return hsum256(acc) + tail;
}

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));

double avx2_norm1(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), kAbsMask));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += std::fabs(x[i]);
  return hsum256(acc) + tail;
}

double avx2_norm2sq(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * x[i];
  return hsum256(acc) + tail;
}

void avx2_soft_threshold(const double* x, double t, double* out,
                         std::size_t n) {
  __m256d vt = _mm256_set1_pd(t);
  __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_and_pd(v, kAbsMask), vt), zero);
    // keep the sign only where the magnitude survived, so zeros are +0.0
    __m256d alive = _mm256_cmp_pd(mag, zero, _CMP_GT_OQ);
    __m256d sign = _mm256_andnot_pd(kAbsMask, v);
    _mm256_storeu_pd(out + i, _mm256_or_pd(mag, _mm256_and_pd(sign, alive)));
  }
  for (; i < n; ++i) {
    double v = x[i];
    out[i] = v > t ? v - t : (v < -t ? v + t : 0.0);
  }
}

const Ops kAvx2Ops = {
    "avx2",        avx2_dot,   avx2_axpy,    avx2_dot_bits,
    avx2_add_bits, avx2_sum,   avx2_norm1,   avx2_norm2sq,
    avx2_soft_threshold,
};

}  // namespace

const Ops* avx2_ops_if_supported() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return &kAvx2Ops;
  }
  return nullptr;
}

}  // namespace crslearn::kernels

#endif  // x86_64
