/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ogsk {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain error";
    case ErrorCode::DecodeFailure: return "decode failure";
    case ErrorCode::CalibrationFailure: return "calibration failure";
    case ErrorCode::ContractViolation: return "contract violation";
    case ErrorCode::UndefinedLlr: return "undefined LLR";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::InsufficientData: return "insufficient data";
    case ErrorCode::Config: return "configuration error";
    case ErrorCode::Io: return "I/O error";
  }
  return "unknown error";
}

namespace {

int wrap(int v, int n) {
  int r = v % n;
  return r < 0 ? r + n : r;
}

double lower_tail(double x, double mu, double sd) {
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  return 0.5 * std::erfc(-(x - mu) / (sd * std::sqrt(2.0)));
}

double upper_tail(double x, double mu, double sd) {
  if (x == -std::numeric_limits<double>::infinity()) return 1.0;
  if (x == std::numeric_limits<double>::infinity()) return 0.0;
  return 0.5 * std::erfc((x - mu) / (sd * std::sqrt(2.0)));
}

}  // namespace

Constellation::Constellation(int m) : m_(m) {
  if (m < 2 || m % 2 != 0 || m > 30) {
    throw Error(ErrorCode::Domain, "constellation order m must be even and in [2, 30], got " +
                                       std::to_string(m));
  }
  side_ = 1 << (m / 2);
  pam_.resize(side_);
  for (int t = 0; t < side_; ++t) pam_[t] = 2.0 * t - side_ + 1;
  e_avg_ = (2.0 / 3.0) * (std::ldexp(1.0, m) - 1.0);
}

double Constellation::pam_value(int index) const {
  if (index < 0 || index >= side_) {
    throw Error(ErrorCode::Domain, "PAM index out of range: " + std::to_string(index));
  }
  return pam_[index];
}

bool Constellation::is_pam_point(double value) const noexcept {
  if (!std::isfinite(value)) return false;
  const double t = (value + side_ - 1) / 2.0;
  return t >= 0 && t <= side_ - 1 && t == std::floor(t);
}

int Constellation::pam_index(double value) const {
  if (!is_pam_point(value)) {
    throw Error(ErrorCode::Domain, "value is not a PAM point of the " + std::to_string(size()) +
                                       "-QAM constellation: " + std::to_string(value));
  }
  return static_cast<int>((value + side_ - 1) / 2.0);
}

bool Constellation::contains(Complex symbol) const noexcept {
  return is_pam_point(symbol.real()) && is_pam_point(symbol.imag());
}

int Constellation::nearest_index(double x) const {
  if (!std::isfinite(x)) throw Error(ErrorCode::Domain, "cannot quantize a non-finite value");
  const double t = std::floor((x + side_ - 1) / 2.0 + 0.5);
  return static_cast<int>(std::clamp(t, 0.0, static_cast<double>(side_ - 1)));
}

RingElement make_ring_element(int re, int im, int modulus) {
  if (modulus < 2) throw Error(ErrorCode::Domain, "ring modulus must be at least 2");
  return RingElement{wrap(re, modulus), wrap(im, modulus), modulus};
}

RingElement phi(Complex symbol, const Constellation& c) {
  if (!c.contains(symbol)) {
    throw Error(ErrorCode::Domain, "symbol is not in the QAM alphabet");
  }
  return RingElement{c.pam_index(symbol.real()), c.pam_index(symbol.imag()), c.side()};
}

Complex phi_inv(const RingElement& r, const Constellation& c) {
  if (r.modulus != c.side()) {
    throw Error(ErrorCode::Domain, "ring element modulus does not match the constellation");
  }
  return {c.pam_value(r.re), c.pam_value(r.im)};
}

RingElement ring_add(const RingElement& a, const RingElement& b) {
  if (a.modulus != b.modulus) throw Error(ErrorCode::Domain, "ring moduli differ");
  return RingElement{(a.re + b.re) % a.modulus, (a.im + b.im) % a.modulus, a.modulus};
}

RingElement ring_sub(const RingElement& a, const RingElement& b) {
  if (a.modulus != b.modulus) throw Error(ErrorCode::Domain, "ring moduli differ");
  return RingElement{wrap(a.re - b.re, a.modulus), wrap(a.im - b.im, a.modulus), a.modulus};
}

Complex quantize(Complex beta, const Constellation& c) {
  return {c.pam_value(c.nearest_index(beta.real())), c.pam_value(c.nearest_index(beta.imag()))};
}

double quantize_pam(double x, const Constellation& c) {
  return c.pam_value(c.nearest_index(x));
}

Pmf::Pmf(std::vector<double> support, std::vector<double> mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
  if (support_.size() != mass_.size() || mass_.empty()) {
    throw Error(ErrorCode::Domain, "PMF support and mass sizes differ");
  }
  for (double p : mass_) {
    if (!(p >= 0.0)) throw Error(ErrorCode::Domain, "PMF mass must be non-negative");
  }
}

double Pmf::total() const noexcept {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

QamPmf::QamPmf(int side, std::vector<double> mass) : side_(side), mass_(std::move(mass)) {
  if (side < 2 || mass_.size() != static_cast<std::size_t>(side) * side) {
    throw Error(ErrorCode::Domain, "QAM PMF must hold side*side entries");
  }
  for (double p : mass_) {
    if (!(p >= 0.0)) throw Error(ErrorCode::Domain, "PMF mass must be non-negative");
  }
}

double QamPmf::total() const noexcept {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

Pmf QamPmf::marginal_real(const Constellation& c) const {
  if (c.side() != side_) throw Error(ErrorCode::Domain, "constellation does not match PMF");
  std::vector<double> m(side_, 0.0);
  for (int a = 0; a < side_; ++a)
    for (int b = 0; b < side_; ++b) m[a] += at(a, b);
  return Pmf({c.pam_points().begin(), c.pam_points().end()}, std::move(m));
}

Pmf QamPmf::marginal_imag(const Constellation& c) const {
  if (c.side() != side_) throw Error(ErrorCode::Domain, "constellation does not match PMF");
  std::vector<double> m(side_, 0.0);
  for (int a = 0; a < side_; ++a)
    for (int b = 0; b < side_; ++b) m[b] += at(a, b);
  return Pmf({c.pam_points().begin(), c.pam_points().end()}, std::move(m));
}

double region_mass(double mu, double var, int index, const Constellation& c) {
  if (!(var > 0.0) || !std::isfinite(var)) {
    throw Error(ErrorCode::Domain, "Gaussian variance must be positive and finite");
  }
  if (!std::isfinite(mu)) throw Error(ErrorCode::Domain, "Gaussian mean must be finite");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double centre = c.pam_value(index);
  const double half = c.d_min() / 2.0;
  const double lo = index == 0 ? -inf : centre - half;
  const double hi = index == c.side() - 1 ? inf : centre + half;
  const double sd = std::sqrt(var);
  // Beyond 40 sd both tails underflow to zero.
  if (lo - mu > 40.0 * sd || mu - hi > 40.0 * sd) return 0.0;
  // Difference of whichever tails are small, to keep precision far from mu.
  if (hi <= mu) return std::max(0.0, lower_tail(hi, mu, sd) - lower_tail(lo, mu, sd));
  if (lo >= mu) return std::max(0.0, upper_tail(lo, mu, sd) - upper_tail(hi, mu, sd));
  return std::max(0.0, 1.0 - lower_tail(lo, mu, sd) - upper_tail(hi, mu, sd));
}

Pmf induce_pmf(double mu, double var, const Constellation& c) {
  std::vector<double> mass(c.side());
  for (int t = 0; t < c.side(); ++t) mass[t] = region_mass(mu, var, t, c);
  return Pmf({c.pam_points().begin(), c.pam_points().end()}, std::move(mass));
}

QamPmf induce_qam_pmf(Complex mu, double var_per_dim, const Constellation& c) {
  return product_pmf(induce_pmf(mu.real(), var_per_dim, c), induce_pmf(mu.imag(), var_per_dim, c));
}

Pmf uniform_pmf(const Constellation& c) {
  return Pmf({c.pam_points().begin(), c.pam_points().end()},
             std::vector<double>(c.side(), 1.0 / c.side()));
}

QamPmf product_pmf(const Pmf& re, const Pmf& im) {
  if (re.size() != im.size()) throw Error(ErrorCode::Domain, "marginals differ in size");
  const int n = static_cast<int>(re.size());
  std::vector<double> mass(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mass[a * n + b] = re[a] * im[b];
  return QamPmf(n, std::move(mass));
}

Pmf circular_shift(const Pmf& p, int s) {
  const int n = static_cast<int>(p.size());
  std::vector<double> mass(n);
  for (int t = 0; t < n; ++t) mass[t] = p[wrap(t + s, n)];
  return Pmf({p.support().begin(), p.support().end()}, std::move(mass));
}

QamPmf circular_shift(const QamPmf& p, const RingElement& s) {
  const int n = p.side();
  if (s.modulus != n) throw Error(ErrorCode::Domain, "shift modulus does not match PMF");
  std::vector<double> mass(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mass[a * n + b] = p.at(wrap(a + s.re, n), wrap(b + s.im, n));
  return QamPmf(n, std::move(mass));
}

QamPmf ring_convolve(const QamPmf& a, const QamPmf& b) {
  const int n = a.side();
  if (b.side() != n) throw Error(ErrorCode::Domain, "PMF sizes differ");
  std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);
  for (int a1 = 0; a1 < n; ++a1)
    for (int a2 = 0; a2 < n; ++a2) {
      const double pa = a.at(a1, a2);
      if (pa == 0.0) continue;
      for (int b1 = 0; b1 < n; ++b1)
        for (int b2 = 0; b2 < n; ++b2) mass[((a1 + b1) % n) * n + (a2 + b2) % n] += pa * b.at(b1, b2);
    }
  return QamPmf(n, std::move(mass));
}

double point_mass(const Pmf& p, double x) {
  const auto support = p.support();
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] == x) return p[i];
  }
  throw Error(ErrorCode::Domain, "point is not in the PMF support: " + std::to_string(x));
}

double point_mass(const QamPmf& p, Complex x, const Constellation& c) {
  if (c.side() != p.side()) throw Error(ErrorCode::Domain, "constellation does not match PMF");
  const RingElement r = phi(x, c);
  return p.at(r.re, r.im);
}

}  // namespace ogsk
