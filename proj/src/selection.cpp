/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/selection.hpp"

#include <cmath>

namespace ogsk {

double equalized_variance_per_dim(const Constellation& c, double sigma2, Complex est) {
  const double gain = std::norm(est);
  if (gain == 0.0) throw Error(ErrorCode::DecodeFailure, "channel estimate is zero");
  if (!(sigma2 >= 0.0)) throw Error(ErrorCode::Domain, "noise variance must be non-negative");
  return c.e_avg() * sigma2 / (2.0 * gain);
}

namespace {

// A zero-variance Gaussian quantizes to a point mass; keep region_mass happy.
constexpr double kMinVariance = 1e-300;

QamPmf recovered_pmf(const FacilitatorState& node1, const Constellation& c, double sigma2,
                     Complex link_est, Complex subtracted_csr) {
  const double var = std::max(equalized_variance_per_dim(c, sigma2, link_est), kMinVariance);
  const Complex mu = phi_inv(ring_add(phi(node1.csr12, c), phi(node1.csr13, c)), c);
  return circular_shift(induce_qam_pmf(mu, var, c), phi(subtracted_csr, c));
}

double opposite_side_mass(const Pmf& marginal, double reference, const GuardBandQuantizer& q) {
  const BitDecision bit = two_level_quantize(reference, q);
  if (bit == BitDecision::NoConsensus) {
    throw Error(ErrorCode::ContractViolation, "node-1 sample lies inside the guard band");
  }
  double p = 0.0;
  const auto support = marginal.support();
  for (std::size_t t = 0; t < support.size(); ++t) {
    const BitDecision other = two_level_quantize(support[t], q);
    if (other != BitDecision::NoConsensus && other != bit) p += marginal[t];
  }
  return std::min(1.0, p);
}

double error_prob(const QamPmf& pmf, Complex reference, const Constellation& c,
                  const GuardBandQuantizer& q, Part part) {
  const Pmf marginal = part == Part::Real ? pmf.marginal_real(c) : pmf.marginal_imag(c);
  return opposite_side_mass(marginal, component(reference, part), q);
}

// Same quantity without the 2^m table: the Gaussian factorizes per dimension,
// so the part marginal is the shifted 1-D PMF of that dimension.
double error_prob_1d(const FacilitatorState& node1, const Constellation& c, double sigma2,
                     Complex link_est, Complex subtracted_csr, Complex reference,
                     const GuardBandQuantizer& q, Part part) {
  const double var = std::max(equalized_variance_per_dim(c, sigma2, link_est), kMinVariance);
  const Complex mu = phi_inv(ring_add(phi(node1.csr12, c), phi(node1.csr13, c)), c);
  const RingElement shift = phi(subtracted_csr, c);
  const Pmf dim = induce_pmf(component(mu, part), var, c);
  const Pmf marginal = circular_shift(dim, part == Part::Real ? shift.re : shift.im);
  return opposite_side_mass(marginal, component(reference, part), q);
}

}  // namespace

QamPmf recovered_pmf_at_node2(const FacilitatorState& node1, const Constellation& c, double sigma2) {
  // node-2 decodes over h12 and subtracts its own h12 CSR.
  return recovered_pmf(node1, c, sigma2, node1.est12, node1.csr12);
}

QamPmf recovered_pmf_at_node3(const FacilitatorState& node1, const Constellation& c, double sigma2) {
  return recovered_pmf(node1, c, sigma2, node1.est13, node1.csr13);
}

double error_prob_at_node2(const FacilitatorState& node1, const Constellation& c,
                           const GuardBandQuantizer& q, double sigma2, Part part) {
  return error_prob(recovered_pmf_at_node2(node1, c, sigma2), node1.csr13, c, q, part);
}

double error_prob_at_node3(const FacilitatorState& node1, const Constellation& c,
                           const GuardBandQuantizer& q, double sigma2, Part part) {
  return error_prob(recovered_pmf_at_node3(node1, c, sigma2), node1.csr12, c, q, part);
}

ChannelId select_csr(const FacilitatorState& node1, const Constellation& c,
                     const GuardBandQuantizer& q, double sigma2, std::span<const Part> parts) {
  // A zero estimate means that side cannot be recovered at all.
  if (std::norm(node1.est12) == 0.0) return ChannelId::H12;
  if (std::norm(node1.est13) == 0.0) return ChannelId::H13;
  double p2 = 0.0;
  double p3 = 0.0;
  for (Part part : parts) {
    p2 += error_prob_1d(node1, c, sigma2, node1.est12, node1.csr12, node1.csr13, q, part);
    p3 += error_prob_1d(node1, c, sigma2, node1.est13, node1.csr13, node1.csr12, q, part);
  }
  return p2 >= p3 ? ChannelId::H12 : ChannelId::H13;
}

ChannelId select_csr_by_strength(const FacilitatorState& node1) {
  return std::abs(node1.est12) <= std::abs(node1.est13) ? ChannelId::H12 : ChannelId::H13;
}

}  // namespace ogsk
