/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Choice of CSR on samples where both channels are in consensus. Every
// function here takes node-1's state only: the decision needs no extra
// communication.

#include <span>

#include "ogsk/consensus.hpp"
#include "ogsk/protocol.hpp"

namespace ogsk {

/// Per-dimension variance of the equalized broadcast as seen through a link
/// with estimate `est`: E_avg * sigma2 / |est|^2 is the complex variance.
double equalized_variance_per_dim(const Constellation& c, double sigma2, Complex est);

/// Node-1's model of the PMF of the CSR that node-2 recovers for h13 by ring
/// subtraction, built on the full QAM grid.
QamPmf recovered_pmf_at_node2(const FacilitatorState& node1, const Constellation& c, double sigma2);
/// Mirror for node-3's recovered h12.
QamPmf recovered_pmf_at_node3(const FacilitatorState& node1, const Constellation& c, double sigma2);

/// Probability that node-2's recovered h13 sample in `part` lands out of band
/// on the side opposite to node-1's. Throws ContractViolation if node-1's
/// sample is itself inside the guard band, DecodeFailure if h12's estimate is 0.
double error_prob_at_node2(const FacilitatorState& node1, const Constellation& c,
                           const GuardBandQuantizer& q, double sigma2, Part part);
double error_prob_at_node3(const FacilitatorState& node1, const Constellation& c,
                           const GuardBandQuantizer& q, double sigma2, Part part);

/// Likelihood rule: h12 iff the error probability at node-2 (which decodes
/// h13) is at least the one at node-3 (which decodes h12). With several parts
/// the probabilities are summed. Ties go to h12.
ChannelId select_csr(const FacilitatorState& node1, const Constellation& c,
                     const GuardBandQuantizer& q, double sigma2, std::span<const Part> parts);

/// Channel-strength rule: keep the CSR of the weaker link, since recovering
/// the other CSR would run over it. Ties go to h12.
ChannelId select_csr_by_strength(const FacilitatorState& node1);

}  // namespace ogsk
