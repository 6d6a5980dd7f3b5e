/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Mutual information between node-1's CSR symbols and its public broadcast:
// an exact enumerator over the ring model and a plug-in estimator over
// simulated symbols.

#include <cstdint>
#include <span>

#include "ogsk/algebra.hpp"

namespace ogsk {

/// Shannon entropy in bits of a (not necessarily normalized) mass vector.
double entropy_bits(std::span<const double> mass);

/// Plug-in MI estimate in bits from paired symbols x in [0, nx), y in [0, ny).
/// Needs at least 100 * nx * ny pairs (InsufficientData otherwise). With
/// `miller_madow` each entropy gets the (K - 1) / (2 N ln 2) correction, K the
/// number of occupied cells; the result is floored at 0.
double empirical_mi(std::span<const int> x, std::span<const int> y, int nx, int ny,
                    bool miller_madow = false);

/// Mean plug-in MI over `rounds` random permutations of y: the estimator's
/// bias floor for independent data with the same marginals.
double shuffled_mi_floor(std::span<const int> x, std::span<const int> y, int nx, int ny,
                         int rounds, std::uint64_t seed);

struct RingLeakage {
  double mi_single_12 = 0.0;  // I(C_1^{h12}; broadcast)
  double mi_single_13 = 0.0;  // I(C_1^{h13}; broadcast)
  double mi_joint = 0.0;      // I(C_1^{h12}, C_1^{h13}; broadcast)
  double h12 = 0.0;           // H(C_1^{h12})
  double h13 = 0.0;           // H(C_1^{h13})
};

/// Exact leakage for independent CSR symbols with the given priors. For
/// m <= 6 every quantity is summed from its definition over the joint
/// distribution; larger alphabets use the equivalent entropy identities.
RingLeakage exact_mi_ring(const QamPmf& prior12, const QamPmf& prior13, const Constellation& c);

}  // namespace ogsk
