/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <random>

#include "doctest.h"
#include "ogsk/algebra.hpp"

using namespace ogsk;

namespace {

// Independent oracle: PAM index of a value is (v + n - 1) / 2.
int oracle_index(double v, int side) { return static_cast<int>(std::lround((v + side - 1) / 2.0)); }

// Midpoint-rule integral of N(mu, var) over [lo, hi], with infinite ends
// truncated at 12 sd.
double riemann_mass(double mu, double var, double lo, double hi) {
  const double sd = std::sqrt(var);
  lo = std::max(lo, mu - 12.0 * sd);
  hi = std::min(hi, mu + 12.0 * sd);
  if (hi <= lo) return 0.0;
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  double sum = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double x = lo + (i + 0.5) * h;
    sum += std::exp(-(x - mu) * (x - mu) / (2.0 * var));
  }
  return sum * h / std::sqrt(2.0 * M_PI * var);
}

std::vector<RingElement> all_elements(int side) {
  std::vector<RingElement> out;
  for (int a = 0; a < side; ++a)
    for (int b = 0; b < side; ++b) out.push_back(make_ring_element(a, b, side));
  return out;
}

}  // namespace

TEST_CASE("constellation geometry") {
  for (int m : {2, 4, 6, 8, 10}) {
    Constellation c(m);
    const int n = 1 << (m / 2);
    CHECK(c.side() == n);
    CHECK(c.size() == n * n);
    CHECK(c.d_min() == 2.0);
    const auto pts = c.pam_points();
    REQUIRE(pts.size() == static_cast<std::size_t>(n));
    double e = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(pts[i] == -n + 1 + 2.0 * i);
      CHECK(pts[i] == -pts[pts.size() - 1 - i]);
      for (double q : pts) e += pts[i] * pts[i] + q * q;
    }
    CHECK(c.e_avg() == doctest::Approx(e / (n * n)).epsilon(1e-14));
    CHECK(c.e_avg() == doctest::Approx(2.0 / 3.0 * ((1 << m) - 1)).epsilon(1e-14));
  }
  CHECK(Constellation(4).e_avg() == doctest::Approx(10.0));
  CHECK_THROWS_AS(Constellation(3), Error);
  CHECK_THROWS_AS(Constellation(0), Error);
  CHECK_THROWS_AS(Constellation(-2), Error);
}

TEST_CASE("phi examples") {
  Constellation c4(4);
  CHECK(phi({-3, -3}, c4) == make_ring_element(0, 0, 4));
  CHECK(phi({3, 3}, c4) == make_ring_element(3, 3, 4));
  CHECK(phi({1, -1}, c4) == make_ring_element(2, 1, 4));
  CHECK(phi_inv(make_ring_element(0, 0, 4), c4) == Complex(-3, -3));
  CHECK(phi_inv(make_ring_element(3, 3, 4), c4) == Complex(3, 3));
  Constellation c2(2);
  CHECK(phi_inv(make_ring_element(1, 0, 2), c2) == Complex(1, -1));
  CHECK_THROWS_AS(phi({0.5, 1}, c4), Error);
  CHECK_THROWS_AS(phi({5, 1}, c4), Error);
}

TEST_CASE("phi is a bijection, exhaustive") {
  for (int m : {2, 4, 6}) {
    Constellation c(m);
    std::vector<int> seen(c.size(), 0);
    for (double re : c.pam_points())
      for (double im : c.pam_points()) {
        const RingElement r = phi({re, im}, c);
        CHECK(r.re == oracle_index(re, c.side()));
        CHECK(r.im == oracle_index(im, c.side()));
        CHECK(phi_inv(r, c) == Complex(re, im));
        ++seen[r.re * c.side() + r.im];
      }
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("ring examples") {
  CHECK(ring_add(make_ring_element(3, 2, 4), make_ring_element(2, 3, 4)) == make_ring_element(1, 1, 4));
  CHECK(ring_sub(make_ring_element(0, 0, 4), make_ring_element(1, 1, 4)) == make_ring_element(3, 3, 4));
  CHECK(make_ring_element(5, -1, 4) == make_ring_element(1, 3, 4));
  CHECK_THROWS_AS(ring_add(make_ring_element(0, 0, 4), make_ring_element(0, 0, 2)), Error);
  CHECK_THROWS_AS(ring_sub(make_ring_element(0, 0, 4), make_ring_element(0, 0, 8)), Error);
}

TEST_CASE("ring is an abelian group, exhaustive") {
  for (int m : {2, 4}) {
    const int n = 1 << (m / 2);
    const auto els = all_elements(n);
    const RingElement zero = make_ring_element(0, 0, n);
    for (const auto& a : els) {
      CHECK(ring_add(a, zero) == a);
      CHECK(ring_sub(a, a) == zero);
      CHECK(ring_add(ring_sub(zero, a), a) == zero);
      for (const auto& b : els) {
        const RingElement s = ring_add(a, b);
        CHECK(s.re == (a.re + b.re) % n);
        CHECK(s.im == (a.im + b.im) % n);
        CHECK(s == ring_add(b, a));
        CHECK(ring_sub(s, b) == a);
        for (const auto& d : els) CHECK(ring_add(ring_add(a, b), d) == ring_add(a, ring_add(b, d)));
      }
    }
  }
}

TEST_CASE("quantize") {
  Constellation c(4);
  CHECK(quantize({0.9, -2.6}, c) == Complex(1, -3));
  CHECK(quantize({100, 100}, c) == Complex(3, 3));
  CHECK(quantize({-100, 2.2}, c) == Complex(-3, 3));
  for (double re : c.pam_points())
    for (double im : c.pam_points()) CHECK(quantize({re, im}, c) == Complex(re, im));
  // Decision boundaries sit halfway; ties round up.
  CHECK(quantize_pam(0.0, c) == 1.0);
  CHECK(quantize_pam(-2.0, c) == -1.0);
  CHECK(quantize_pam(-2.0000001, c) == -3.0);
  CHECK_THROWS_AS(quantize({NAN, 0}, c), Error);
  CHECK_THROWS_AS(quantize({0, INFINITY}, c), Error);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8, 8);
  Constellation c10(10);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng);
    const double b = a + std::abs(u(rng));
    CHECK(quantize_pam(a, c) <= quantize_pam(b, c));
    const double q = quantize_pam(a, c10);
    CHECK(quantize_pam(q, c10) == q);
    // Oracle: brute-force nearest point.
    double best = c.pam_points()[0];
    for (double p : c.pam_points())
      if (std::abs(a - p) < std::abs(a - best)) best = p;
    CHECK(quantize_pam(a, c) == best);
  }
}

TEST_CASE("induce_pmf examples") {
  Constellation c2(2);
  const Pmf p = induce_pmf(0.0, 1.0, c2);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));

  Constellation c4(4);
  const Pmf narrow = induce_pmf(1.0, 1e-12, c4);
  CHECK(narrow[2] == doctest::Approx(1.0));
  CHECK(narrow[0] == 0.0);
  const Pmf sym = induce_pmf(0.0, 2.3, c4);
  CHECK(sym[0] == doctest::Approx(sym[3]).epsilon(1e-14));
  CHECK(sym[1] == doctest::Approx(sym[2]).epsilon(1e-14));
  CHECK_THROWS_AS(induce_pmf(0.0, 0.0, c4), Error);
  CHECK_THROWS_AS(induce_pmf(0.0, -1.0, c4), Error);
}

TEST_CASE("induce_pmf matches Riemann integration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mu_d(-9, 9);
  std::uniform_real_distribution<double> lv(-3, 2.5);
  for (int m : {2, 4, 6}) {
    Constellation c(m);
    for (int trial = 0; trial < 6; ++trial) {
      const double mu = mu_d(rng);
      const double var = std::pow(10.0, lv(rng));
      const Pmf p = induce_pmf(mu, var, c);
      CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-12));
      for (int t = 0; t < c.side(); ++t) {
        const double lo = t == 0 ? -INFINITY : c.pam_value(t) - 1.0;
        const double hi = t == c.side() - 1 ? INFINITY : c.pam_value(t) + 1.0;
        CHECK(std::abs(p[t] - riemann_mass(mu, var, lo, hi)) < 1e-9);
      }
    }
  }
}

TEST_CASE("circular shift") {
  Constellation c(4);
  const Pmf p({-3, -1, 1, 3}, {0.1, 0.2, 0.3, 0.4});
  const Pmf s2 = circular_shift(p, 2);
  CHECK(s2[0] == 0.3);
  CHECK(s2[1] == 0.4);
  CHECK(s2[2] == 0.1);
  CHECK(s2[3] == 0.2);
  const Pmf s0 = circular_shift(p, 0);
  for (int i = 0; i < 4; ++i) CHECK(s0[i] == p[i]);
  CHECK(circular_shift(p, -1)[0] == 0.4);
  CHECK(circular_shift(p, 5)[0] == 0.2);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Pmf x = circular_shift(circular_shift(p, a), b);
      const Pmf y = circular_shift(p, (a + b) % 4);
      for (int i = 0; i < 4; ++i) CHECK(x[i] == y[i]);
    }
  CHECK(point_mass(p, 1.0) == 0.3);
  CHECK(point_mass(uniform_pmf(c), -3.0) == 0.25);
  CHECK_THROWS_AS(point_mass(p, 2.0), Error);
}

TEST_CASE("subtraction over the ring shifts the PMF, exhaustive") {
  // PMF of X - a equals circular_shift(PMF of X, a) on the ring-ordered grid.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int m : {2, 4}) {
    Constellation c(m);
    const int n = c.side();
    std::vector<double> mass(n * n);
    double total = 0.0;
    for (auto& v : mass) total += (v = u(rng));
    for (auto& v : mass) v /= total;
    const QamPmf px(n, mass);
    for (const auto& a : all_elements(n)) {
      std::vector<double> direct(n * n, 0.0);
      for (const auto& x : all_elements(n)) {
        const RingElement d = ring_sub(x, a);
        direct[d.re * n + d.im] += px.at(x.re, x.im);
      }
      const QamPmf shifted = circular_shift(px, a);
      for (int i = 0; i < n * n; ++i) CHECK(shifted.mass()[i] == doctest::Approx(direct[i]).epsilon(1e-15));
      // Per-dimension version agrees with the marginal.
      const Pmf mr = circular_shift(px.marginal_real(c), a.re);
      const Pmf sr = shifted.marginal_real(c);
      for (int i = 0; i < n; ++i) CHECK(mr[i] == doctest::Approx(sr[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("product and convolution PMFs") {
  Constellation c(4);
  const QamPmf u = product_pmf(uniform_pmf(c), uniform_pmf(c));
  CHECK(u.total() == doctest::Approx(1.0));
  const QamPmf g = induce_qam_pmf({0.4, -1.7}, 0.8, c);
  CHECK(g.total() == doctest::Approx(1.0).epsilon(1e-12));
  // Translation preserves uniformity.
  const QamPmf conv = ring_convolve(g, u);
  for (double v : conv.mass()) CHECK(v == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(point_mass(g, {1, -1}, c) == doctest::Approx(g.at(2, 1)));
  const Pmf re = g.marginal_real(c);
  const Pmf direct = induce_pmf(0.4, 0.8, c);
  for (int i = 0; i < 4; ++i) CHECK(re[i] == doctest::Approx(direct[i]).epsilon(1e-14));
}
