/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Square QAM constellation, the Gaussian-integer ring Z_n[i] it is mapped
// onto, quantization, and PMFs induced on the PAM grid by Gaussian densities.

#include <complex>
#include <span>
#include <vector>

#include "ogsk/error.hpp"

namespace ogsk {

using Complex = std::complex<double>;

/// Regular square 2^m-QAM with PAM component {-n+1, -n+3, ..., n-1}, n = 2^{m/2}.
class Constellation {
 public:
  explicit Constellation(int m);

  int bits() const noexcept { return m_; }
  /// Number of PAM points per dimension; also the ring modulus.
  int side() const noexcept { return side_; }
  int size() const noexcept { return side_ * side_; }
  double d_min() const noexcept { return 2.0; }
  double e_avg() const noexcept { return e_avg_; }
  double max_amplitude() const noexcept { return side_ - 1; }

  std::span<const double> pam_points() const noexcept { return pam_; }

  double pam_value(int index) const;
  /// Index of an exact PAM point; throws Domain if `value` is not a point.
  int pam_index(double value) const;
  bool is_pam_point(double value) const noexcept;
  bool contains(Complex symbol) const noexcept;

  /// Index of the nearest PAM point, saturating beyond the outer points.
  int nearest_index(double x) const;

  friend bool operator==(const Constellation& a, const Constellation& b) noexcept {
    return a.m_ == b.m_;
  }

 private:
  int m_;
  int side_;
  double e_avg_;
  std::vector<double> pam_;
};

/// Element of Z_n[i]; components are kept reduced modulo `modulus`.
struct RingElement {
  int re = 0;
  int im = 0;
  int modulus = 2;

  friend bool operator==(const RingElement&, const RingElement&) = default;
};

RingElement make_ring_element(int re, int im, int modulus);

RingElement phi(Complex symbol, const Constellation& c);
Complex phi_inv(const RingElement& r, const Constellation& c);

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_sub(const RingElement& a, const RingElement& b);

/// Per-component nearest-neighbour quantization onto the QAM alphabet.
Complex quantize(Complex beta, const Constellation& c);
double quantize_pam(double x, const Constellation& c);

/// Probability mass over the PAM points of a constellation, increasing order.
class Pmf {
 public:
  Pmf(std::vector<double> support, std::vector<double> mass);

  std::span<const double> support() const noexcept { return support_; }
  std::span<const double> mass() const noexcept { return mass_; }
  std::size_t size() const noexcept { return mass_.size(); }
  double operator[](std::size_t i) const { return mass_[i]; }
  double total() const noexcept;

 private:
  std::vector<double> support_;
  std::vector<double> mass_;
};

/// Probability mass over the full QAM grid. Entry (a, b) is the point whose
/// ring image is a + bi, stored row-major in `a`.
class QamPmf {
 public:
  QamPmf(int side, std::vector<double> mass);

  int side() const noexcept { return side_; }
  std::span<const double> mass() const noexcept { return mass_; }
  double at(int re_index, int im_index) const { return mass_[re_index * side_ + im_index]; }
  double total() const noexcept;

  Pmf marginal_real(const Constellation& c) const;
  Pmf marginal_imag(const Constellation& c) const;

 private:
  int side_;
  std::vector<double> mass_;
};

/// Mass that N(mu, var) places on the decision region of PAM point `index`.
/// The outermost regions extend to +-infinity.
double region_mass(double mu, double var, int index, const Constellation& c);

Pmf induce_pmf(double mu, double var, const Constellation& c);

/// Product PMF of independent real and imaginary Gaussians, each with
/// variance `var_per_dim`.
QamPmf induce_qam_pmf(Complex mu, double var_per_dim, const Constellation& c);

Pmf uniform_pmf(const Constellation& c);
QamPmf product_pmf(const Pmf& re, const Pmf& im);

/// Left circular shift: mass'(t) = mass((t + s) mod n). Negative and
/// out-of-range shifts are reduced modulo n.
Pmf circular_shift(const Pmf& p, int s);
QamPmf circular_shift(const QamPmf& p, const RingElement& s);

/// Distribution of X + Y over the ring for independent X ~ a, Y ~ b.
QamPmf ring_convolve(const QamPmf& a, const QamPmf& b);

double point_mass(const Pmf& p, double x);
double point_mass(const QamPmf& p, Complex x, const Constellation& c);

}  // namespace ogsk
