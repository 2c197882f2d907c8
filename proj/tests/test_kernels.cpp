// Copyright (c) the crs-learn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "crslearn/kernels.hpp"
#include "crslearn/rng.hpp"

using namespace crslearn;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 2.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = (rng.uniform() - 0.5) * scale;
  return v;
}

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = rng.uniform() < 0.3 ? 1 : 0;
  return v;
}

bool close(double a, double b, double rel = 1e-12) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= rel * scale;
}

}  // namespace

TEST_CASE("scalar reference kernels on small fixed inputs") {
  const auto& ops = kernels::scalar_ops();
  double a[] = {1.0, 2.0, 3.0};
  double b[] = {4.0, -5.0, 6.0};
  CHECK(ops.dot(a, b, 3) == doctest::Approx(12.0));
  CHECK(ops.sum(a, 3) == doctest::Approx(6.0));
  CHECK(ops.norm1(b, 3) == doctest::Approx(15.0));
  CHECK(ops.norm2sq(a, 3) == doctest::Approx(14.0));

  std::uint8_t bits[] = {1, 0, 1};
  CHECK(ops.dot_bits(bits, b, 3) == doctest::Approx(10.0));

  double acc[] = {0.0, 0.0, 0.0};
  ops.add_bits(2.5, bits, acc, 3);
  CHECK(acc[0] == 2.5);
  CHECK(acc[1] == 0.0);
  CHECK(acc[2] == 2.5);

  double y[] = {1.0, 1.0, 1.0};
  ops.axpy(2.0, a, y, 3);
  CHECK(y[0] == 3.0);
  CHECK(y[1] == 5.0);
  CHECK(y[2] == 7.0);
}

TEST_CASE("soft threshold produces exact zeros and keeps signs") {
  const auto& ops = kernels::scalar_ops();
  double x[] = {0.5, -0.5, 0.05, -0.05, 0.0, 3.0};
  double out[6];
  ops.soft_threshold(x, 0.1, out, 6);
  CHECK(out[0] == doctest::Approx(0.4));
  CHECK(out[1] == doctest::Approx(-0.4));
  CHECK(out[2] == 0.0);
  CHECK(out[3] == 0.0);
  CHECK(out[4] == 0.0);
  CHECK(out[5] == doctest::Approx(2.9));
  CHECK(!std::signbit(out[2]));
  CHECK(!std::signbit(out[3]));
}

TEST_CASE("every compiled variant matches the scalar reference") {
  const auto& variants = kernels::available_ops();
  REQUIRE(!variants.empty());
  CHECK(variants.front() == &kernels::scalar_ops());

  Rng rng(1234);
  const auto& ref = kernels::scalar_ops();
  for (const auto* ops : variants) {
    CAPTURE(std::string(ops->name));
    // odd lengths exercise the vector tails
    for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{52},
                          std::size_t{64}, std::size_t{257}}) {
      auto a = random_vec(rng, n);
      auto b = random_vec(rng, n);
      auto bits = random_bits(rng, n);

      CHECK(close(ops->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)));
      CHECK(close(ops->sum(a.data(), n), ref.sum(a.data(), n)));
      CHECK(close(ops->norm1(a.data(), n), ref.norm1(a.data(), n)));
      CHECK(close(ops->norm2sq(a.data(), n), ref.norm2sq(a.data(), n)));
      CHECK(close(ops->dot_bits(bits.data(), a.data(), n),
                  ref.dot_bits(bits.data(), a.data(), n)));

      auto y1 = b, y2 = b;
      ops->axpy(0.77, a.data(), y1.data(), n);
      ref.axpy(0.77, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);

      auto acc1 = b, acc2 = b;
      ops->add_bits(-1.25, bits.data(), acc1.data(), n);
      ref.add_bits(-1.25, bits.data(), acc2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(acc1[i] == acc2[i]);

      std::vector<double> s1(n), s2(n);
      ops->soft_threshold(a.data(), 0.3, s1.data(), n);
      ref.soft_threshold(a.data(), 0.3, s2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(s1[i] == s2[i]);
        if (s1[i] == 0.0) CHECK(!std::signbit(s1[i]));
      }
    }
  }
}

TEST_CASE("active variant is one of the compiled ones") {
  const auto& active = kernels::active_ops();
  bool found = false;
  for (const auto* ops : kernels::available_ops()) {
    if (ops == &active) found = true;
  }
  CHECK(found);
}
