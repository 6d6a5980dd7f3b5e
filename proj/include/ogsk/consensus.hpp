/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Two-level guard-band quantization, guard-band calibration against a target
// initial error rate, and the three-node index exchange.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ogsk/protocol.hpp"

namespace ogsk {

struct GuardBandQuantizer {
  double q_plus = 0.0;
  double q_minus = 0.0;

  static GuardBandQuantizer symmetric(double q);
  /// Throws Domain unless q_minus <= 0 <= q_plus.
  void validate() const;
  bool in_band(double alpha) const noexcept { return q_minus <= alpha && alpha <= q_plus; }
};

enum class BitDecision { Zero, One, NoConsensus };

BitDecision two_level_quantize(double alpha, const GuardBandQuantizer& q);

using IndexSet = std::vector<std::size_t>;  // strictly increasing

/// One CSR sample per index and channel, as held by a single node.
struct NodeStreams {
  std::vector<double> h12;
  std::vector<double> h13;

  const std::vector<double>& of(ChannelId ch) const { return ch == ChannelId::H12 ? h12 : h13; }
};

struct ExchangeMessage {
  int sender = 0;
  std::string description;
  IndexSet h12;
  IndexSet h13;
};

struct ConsensusOutcome {
  IndexSet r_h12;
  IndexSet r_h13;
  IndexSet v;  // r_h12 ∩ r_h13
  IndexSet exclusive_h12;
  IndexSet exclusive_h13;
  std::vector<ExchangeMessage> transcript;

  const IndexSet& r(ChannelId ch) const { return ch == ChannelId::H12 ? r_h12 : r_h13; }
  std::string transcript_json() const;
};

/// Node-2 announces its out-of-band indices to node-1, node-1 broadcasts the
/// indices it agrees on, node-3 broadcasts the final per-channel sets. The
/// streams are indexed by node (0 = node-1).
ConsensusOutcome exchange_indices(const std::array<NodeStreams, 3>& nodes,
                                  const GuardBandQuantizer& q, bool record_transcript = true);

/// Bits of one node's samples at `indices` via Q(.). Throws ContractViolation
/// if any indexed sample lies inside the guard band.
std::vector<std::uint8_t> extract_bits(std::span<const double> samples, const IndexSet& indices,
                                       const GuardBandQuantizer& q);

/// Pairwise bit-mismatch rates on samples that are out of band at all nodes,
/// tabulated so that any symmetric band can be evaluated without rescanning.
class MismatchProfile {
 public:
  explicit MismatchProfile(const Constellation& c);

  /// Adds one sample position observed at nodes 1, 2 and 3.
  void add(double v1, double v2, double v3);
  void merge(const MismatchProfile& other);

  struct Point {
    std::size_t in_consensus = 0;
    std::size_t mismatches_12 = 0;
    std::size_t mismatches_13 = 0;
    double worst_rate() const noexcept;
  };
  Point evaluate(double q) const;

 private:
  int side_;
  // Bucketed by the smallest magnitude across the three nodes.
  std::vector<std::size_t> count_, mis12_, mis13_;
};

struct CalibrationResult {
  GuardBandQuantizer quantizer;
  double mismatch = 0.0;  // worst pairwise rate at the chosen band
  std::size_t consensus_samples = 0;
  std::size_t total_samples = 0;
};

/// Guard-band grid {0, d_min/8, 2 d_min/8, ...} strictly below the largest PAM
/// amplitude.
std::vector<double> guard_band_grid(const Constellation& c);

/// Smallest symmetric band on the grid whose worst pairwise mismatch is at
/// most `target`. Throws CalibrationFailure when none qualifies.
CalibrationResult calibrate_from_profile(const MismatchProfile& profile, double target,
                                         const Constellation& c);

/// Monte Carlo calibration over `n_blocks` protocol rounds pooled over both
/// channels and both parts. Deterministic in `seed`.
CalibrationResult calibrate_guard_bands(double target, double snr_db, double gamma,
                                        const Constellation& c, std::size_t n_blocks,
                                        std::uint64_t seed, const ProtocolConfig& cfg = {},
                                        unsigned threads = 0);

}  // namespace ogsk
