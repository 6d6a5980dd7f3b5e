/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <random>

#include "doctest.h"
#include "ogsk/error.hpp"
#include "ogsk/leakage.hpp"

using namespace ogsk;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

QamPmf uniform_qam(const Constellation& c) {
  return QamPmf(c.side(), std::vector<double>(c.size(), 1.0 / c.size()));
}

// Per-dimension Gaussian-quantized prior: not uniform.
QamPmf skewed_qam(const Constellation& c) {
  const Pmf dim = induce_pmf(0.0, 1.0, c);
  std::vector<double> mass(c.size());
  for (int re = 0; re < c.side(); ++re)
    for (int im = 0; im < c.side(); ++im) mass[re * c.side() + im] = dim[re] * dim[im];
  return QamPmf(c.side(), mass);
}

}  // namespace

TEST_CASE("entropy") {
  CHECK(entropy_bits(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0));
  CHECK(entropy_bits(std::vector<double>{1, 1}) == doctest::Approx(1.0));
  CHECK(entropy_bits(std::vector<double>{1, 0, 0}) == 0.0);
  CHECK(entropy_bits(std::vector<double>{0.2, 0.8}) == doctest::Approx(h2(0.2)));
}

TEST_CASE("plug-in mutual information") {
  std::vector<int> x, y;
  for (int i = 0; i < 4000; ++i) x.push_back(i % 4), y.push_back(i % 4);
  CHECK(empirical_mi(x, y, 4, 4) == doctest::Approx(2.0).epsilon(0.01));

  x.clear(), y.clear();
  auto add = [&](int a, int b, int k) {
    for (int i = 0; i < k; ++i) x.push_back(a), y.push_back(b);
  };
  add(0, 0, 4000), add(0, 1, 1000), add(1, 0, 1000), add(1, 1, 4000);
  CHECK(empirical_mi(x, y, 2, 2) == doctest::Approx(1 - h2(0.2)).epsilon(1e-9));
  CHECK(1 - h2(0.2) == doctest::Approx(0.278).epsilon(0.002));

  // Independent symbols: plug-in bias is about (K - 1) / (2 N ln 2).
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> d(0, 15);
  x.assign(100000, 0), y.assign(100000, 0);
  for (auto& v : x) v = d(rng);
  for (auto& v : y) v = d(rng);
  const double plug = empirical_mi(x, y, 16, 16);
  const double bias = 225.0 / (2 * 100000 * std::log(2.0));
  CHECK(plug < 3 * bias);
  CHECK(empirical_mi(x, y, 16, 16, true) < plug);
  CHECK(empirical_mi(x, y, 16, 16, true) < 0.3 * bias);
  const double floor = shuffled_mi_floor(x, y, 16, 16, 8, 1);
  CHECK(floor == doctest::Approx(bias).epsilon(0.3));
  CHECK(shuffled_mi_floor(x, y, 16, 16, 8, 1) == floor);

  std::vector<int> few(399, 0);
  CHECK_THROWS_AS(empirical_mi(few, few, 2, 2), Error);
  std::vector<int> bad(1000, 5);
  CHECK_THROWS_AS(empirical_mi(bad, bad, 2, 2), Error);
  CHECK_THROWS_AS(empirical_mi(std::vector<int>(500, 0), std::vector<int>(499, 0), 2, 2), Error);
}

TEST_CASE("exact ring leakage with uniform priors") {
  for (int m : {2, 4, 6, 8}) {
    Constellation c(m);
    const auto u = uniform_qam(c);
    const auto r = exact_mi_ring(u, u, c);
    CHECK(std::abs(r.mi_single_12) < 1e-12);
    CHECK(std::abs(r.mi_single_13) < 1e-12);
    CHECK(r.mi_joint == doctest::Approx(double(m)));
    CHECK(r.h12 == doctest::Approx(double(m)));
    CHECK(r.mi_joint == doctest::Approx(r.h13));
  }
}

TEST_CASE("exact ring leakage with skewed priors") {
  // Both code paths (direct sums and entropy identities) must agree.
  for (int m : {4, 6}) {
    Constellation c(m);
    const auto s = skewed_qam(c);
    const auto u = uniform_qam(c);
    const auto r = exact_mi_ring(s, s, c);
    CHECK(r.mi_single_12 > 1e-4);
    CHECK(r.mi_single_12 == doctest::Approx(r.mi_single_13));
    CHECK(r.mi_joint <= r.h12 + r.h13 + 1e-9);
    CHECK(r.h12 < double(m));
    // Uniform h13 hides h12 completely.
    const auto mixed = exact_mi_ring(s, u, c);
    CHECK(std::abs(mixed.mi_single_12) < 1e-12);
    CHECK(mixed.mi_single_13 > 1e-4);
  }
  Constellation c8(8);
  const auto r8 = exact_mi_ring(skewed_qam(c8), skewed_qam(c8), c8);
  CHECK(r8.mi_single_12 > 0);
  CHECK(r8.mi_joint > 0);
}
