/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ogsk/channel.hpp"

namespace ogsk {

double entropy_bits(std::span<const double> mass) {
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double p : mass) {
    if (p > 0.0) {
      const double q = p / total;
      h -= q * std::log2(q);
    }
  }
  return h;
}

namespace {

struct Counts {
  std::vector<double> joint, x, y;
};

Counts tabulate(std::span<const int> x, std::span<const int> y, int nx, int ny) {
  Counts c{std::vector<double>(static_cast<std::size_t>(nx) * ny, 0.0),
           std::vector<double>(nx, 0.0), std::vector<double>(ny, 0.0)};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] >= nx || y[i] < 0 || y[i] >= ny) {
      throw Error(ErrorCode::Domain, "symbol outside its alphabet");
    }
    c.joint[static_cast<std::size_t>(x[i]) * ny + y[i]] += 1.0;
    c.x[x[i]] += 1.0;
    c.y[y[i]] += 1.0;
  }
  return c;
}

double miller_madow(std::span<const double> counts, double n) {
  const auto occupied = std::count_if(counts.begin(), counts.end(), [](double v) { return v > 0; });
  return (static_cast<double>(occupied) - 1.0) / (2.0 * n * std::log(2.0));
}

double plugin_mi(const Counts& c, double n, bool correct) {
  double hx = entropy_bits(c.x);
  double hy = entropy_bits(c.y);
  double hxy = entropy_bits(c.joint);
  if (correct) {
    hx += miller_madow(c.x, n);
    hy += miller_madow(c.y, n);
    hxy += miller_madow(c.joint, n);
  }
  return std::max(0.0, hx + hy - hxy);
}

void check_sizes(std::span<const int> x, std::span<const int> y, int nx, int ny) {
  if (x.size() != y.size()) throw Error(ErrorCode::Domain, "paired samples differ in length");
  if (nx < 1 || ny < 1) throw Error(ErrorCode::Domain, "alphabet sizes must be positive");
  const std::size_t needed = 100ull * static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  if (x.size() < needed) {
    throw Error(ErrorCode::InsufficientData, "MI estimate needs at least " + std::to_string(needed) +
                                                 " samples, got " + std::to_string(x.size()));
  }
}

double mi_term(double pxy, double px, double py) {
  if (pxy <= 0.0) return 0.0;
  return pxy * std::log2(pxy / (px * py));
}

}  // namespace

double empirical_mi(std::span<const int> x, std::span<const int> y, int nx, int ny,
                    bool miller_madow_correction) {
  check_sizes(x, y, nx, ny);
  return plugin_mi(tabulate(x, y, nx, ny), static_cast<double>(x.size()), miller_madow_correction);
}

double shuffled_mi_floor(std::span<const int> x, std::span<const int> y, int nx, int ny,
                         int rounds, std::uint64_t seed) {
  check_sizes(x, y, nx, ny);
  if (rounds < 1) throw Error(ErrorCode::Domain, "need at least one shuffle");
  std::vector<int> shuffled(y.begin(), y.end());
  std::mt19937_64 engine(seed);
  double sum = 0.0;
  for (int r = 0; r < rounds; ++r) {
    std::shuffle(shuffled.begin(), shuffled.end(), engine);
    sum += plugin_mi(tabulate(x, shuffled, nx, ny), static_cast<double>(x.size()), false);
  }
  return sum / rounds;
}

RingLeakage exact_mi_ring(const QamPmf& prior12, const QamPmf& prior13, const Constellation& c) {
  const int n = c.side();
  if (prior12.side() != n || prior13.side() != n) {
    throw Error(ErrorCode::Domain, "priors do not match the constellation");
  }
  const int size = n * n;
  auto index = [n](int re, int im) { return re * n + im; };
  auto sub = [n](int a, int b) { return ((a - b) % n + n) % n; };

  const auto p12 = prior12.mass();
  const auto p13 = prior13.mass();
  const QamPmf sum_pmf = ring_convolve(prior12, prior13);
  const auto ps = sum_pmf.mass();

  RingLeakage out;
  out.h12 = entropy_bits(p12);
  out.h13 = entropy_bits(p13);

  if (c.bits() > 6) {
    // S | C12 = x is C13 shifted by x, so H(S | C12) = H(C13); S is a function
    // of (C12, C13), so the joint leakage is H(S).
    const double hs = entropy_bits(ps);
    out.mi_single_12 = std::max(0.0, hs - out.h13);
    out.mi_single_13 = std::max(0.0, hs - out.h12);
    out.mi_joint = hs;
    return out;
  }

  // I(C12; S) and I(C13; S) from p(x, s) = p12(x) p13(s - x).
  for (int x = 0; x < size; ++x) {
    const int xr = x / n, xi = x % n;
    for (int s = 0; s < size; ++s) {
      const int sr = s / n, si = s % n;
      const double pxs12 = p12[x] * p13[index(sub(sr, xr), sub(si, xi))];
      out.mi_single_12 += mi_term(pxs12, p12[x], ps[s]);
      const double pxs13 = p13[x] * p12[index(sub(sr, xr), sub(si, xi))];
      out.mi_single_13 += mi_term(pxs13, p13[x], ps[s]);
    }
  }
  // I((C12, C13); S): p(x, y, s) = p12(x) p13(y) [s = x + y].
  for (int x = 0; x < size; ++x) {
    for (int y = 0; y < size; ++y) {
      const double pxy = p12[x] * p13[y];
      const int s = index((x / n + y / n) % n, (x % n + y % n) % n);
      out.mi_joint += mi_term(pxy, pxy, ps[s]);
    }
  }
  out.mi_single_12 = std::max(0.0, out.mi_single_12);
  out.mi_single_13 = std::max(0.0, out.mi_single_13);
  return out;
}

}  // namespace ogsk
