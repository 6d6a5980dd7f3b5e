/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Soft information on node-1's key bits. LLRs are log(P(bit 0) / P(bit 1)),
// where node-1 emits bit 0 for samples below the guard band.

#include <cstdint>
#include <vector>

#include "ogsk/consensus.hpp"

namespace ogsk {

inline constexpr double kLlrClamp = 30.0;

/// P(X = A_I(s), Y = A_I(t)) for the PAM samples X at node-1 and Y at the
/// reciprocal node, both quantized from independent noisy estimates of the same
/// channel.
class JointPmfTable {
 public:
  JointPmfTable(int side, std::vector<double> mass, bool monte_carlo);

  int side() const noexcept { return side_; }
  double at(int s, int t) const { return mass_[static_cast<std::size_t>(s) * side_ + t]; }
  double total() const noexcept;
  /// True when the table was estimated by sampling rather than quadrature.
  bool monte_carlo() const noexcept { return monte_carlo_; }

 private:
  int side_;
  std::vector<double> mass_;
  bool monte_carlo_;
};

/// Deterministic quadrature: integrates over node-1's scaled estimate with
/// composite Gauss-Legendre and uses the exact conditional Gaussian of the
/// reciprocal node's estimate. Estimates are h + e with h ~ CN(0, 1),
/// e ~ CN(0, gamma), scaled by `csr_gain` before quantization.
JointPmfTable build_joint_pmf(double gamma, const Constellation& c, double csr_gain = 1.0);

/// Sampling estimate of the same table.
JointPmfTable build_joint_pmf_monte_carlo(double gamma, const Constellation& c, double csr_gain,
                                          std::size_t draws, std::uint64_t seed);

/// LLR at the reciprocal node for its observed PAM sample `p`. The sums run
/// over node-1 samples outside the guard band on each side.
double llr_reciprocal(double p, const JointPmfTable& table, const Constellation& c,
                      const GuardBandQuantizer& q);

/// PMF of one PAM component of node-1's quantized CSR, i.e. of
/// quantize(gain * (h + e)) per dimension, restricted to out-of-band points
/// and renormalized.
Pmf csr_prior(double gamma, const Constellation& c, double csr_gain, const GuardBandQuantizer& q);

/// LLR at the decoding node. `own_csr_sample` is the recovered PAM sample
/// (e.g. R_2^{h13}), `own_other_csr` the same component of the node's inherent
/// CSR (R_2^{h12}) and `channel_est` its estimate of the link to node-1. Each
/// hypothesis x_u for node-1's sample yields a Gaussian around
/// phi^{-1}(phi(x_u) + phi(own_other_csr)); its induced PMF, shifted by
/// phi(own_other_csr), is read at `own_csr_sample` and weighted by the prior.
double llr_decoding(double own_csr_sample, double own_other_csr, Complex channel_est,
                    double sigma2, const Pmf& prior, const Constellation& c,
                    const GuardBandQuantizer& q);

}  // namespace ogsk
