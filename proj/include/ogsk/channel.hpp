/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Random environment of one coherence block: three reciprocal Rayleigh links,
// noisy pilot-based channel estimates at every node, and the receiver noise of
// the Phase-4 broadcast.

#include <cstdint>
#include <random>

#include "ogsk/algebra.hpp"

namespace ogsk {

/// sigma^2 = 10^{-snr/10}, i.e. SNR = 1 / sigma^2 for unit-power channels.
double noise_variance(double snr_db);

/// SplitMix64 finaliser applied to (master, a, b); used to carve independent
/// streams out of one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  /// Draw from CN(0, var).
  Complex complex_normal(double var);
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Adds a CN(0, sigma2) draw. sigma2 == 0 returns `signal` unchanged.
Complex awgn(Complex signal, double sigma2, Rng& rng);

struct CoherenceBlock {
  Complex h12, h13, h23;

  // Phase 1: node-1 pilot, observed by nodes 2 and 3.
  Complex est12_at_node2, est13_at_node3;
  // Phase 2: node-2 pilot, observed by nodes 1 and 3.
  Complex est12_at_node1, est23_at_node3;
  // Phase 3: node-3 pilot, observed by nodes 1 and 2.
  Complex est13_at_node1, est23_at_node2;
  // Phase 4: receiver noise at nodes 2 and 3.
  Complex noise4_at_node2, noise4_at_node3;

  double noise_var = 0.0;
  double gamma = 0.0;
};

/// Deterministic in `block_seed`. All draws come from one engine in a fixed
/// order as unit-variance variates scaled afterwards, so the same seed yields
/// the same gains at every SNR and gamma.
CoherenceBlock draw_block(double snr_db, double gamma, std::uint64_t block_seed);

/// Variant with an explicit noise variance (sigma2 == 0 gives a noiseless block).
CoherenceBlock draw_block_with_noise(double sigma2, double gamma, std::uint64_t block_seed);

}  // namespace ogsk
