/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// The four phases of the algebraic symmetrically quantized group-key round:
// pilots and quantization (phases 1-3), the ring-sum broadcast from node-1
// (phase 4), MAP decoding of the broadcast and recovery by ring subtraction.

#include <array>
#include <cstddef>
#include <optional>

#include "ogsk/algebra.hpp"
#include "ogsk/channel.hpp"

namespace ogsk {

enum class ChannelId { H12 = 0, H13 = 1 };
enum class Part { Real = 0, Imag = 1 };

const char* to_string(ChannelId ch) noexcept;
const char* to_string(Part p) noexcept;

inline double component(Complex z, Part p) noexcept {
  return p == Part::Real ? z.real() : z.imag();
}

/// Gain that maximizes the entropy of quantize(gain * x) per dimension for
/// x ~ N(0, (1 + gamma) / 2), i.e. for a noisy estimate of a CN(0, 1) channel.
/// For m = 4 this makes the quantized CSR exactly uniform.
double equiprobable_csr_gain(const Constellation& c, double gamma);

struct ProtocolConfig {
  /// Channel estimates are multiplied by this before quantization onto the
  /// QAM grid. 1 quantizes the raw estimate.
  double csr_gain = 1.0;
  /// MAP prior over the broadcast symbol; uniform when empty.
  std::optional<QamPmf> map_prior;
};

/// What node-1 knows after phase 4. Selection only ever sees this type.
struct FacilitatorState {
  Complex csr12;  // C_1^{h12}
  Complex csr13;  // C_1^{h13}
  Complex est12;  // h12 + e_1^{(2)}
  Complex est13;  // h13 + e_1^{(3)}
};

/// Node-2 or node-3. The inherent CSR is the one seen through reciprocity with
/// node-1 (h12 at node-2, h13 at node-3); the other one is decoded.
struct PeerState {
  int node = 2;
  Complex inherent_csr;
  Complex inherent_est;
  Complex csr23;
  std::optional<Complex> rx;
  std::optional<Complex> theta_hat;
  std::optional<Complex> decoded_csr;

  ChannelId inherent_channel() const noexcept {
    return node == 2 ? ChannelId::H12 : ChannelId::H13;
  }
  /// Throws ContractViolation if the requested CSR has not been decoded yet.
  Complex csr(ChannelId ch) const;
  bool has_csr(ChannelId ch) const noexcept;
};

struct PartialRound {
  FacilitatorState node1;
  PeerState node2;
  PeerState node3;
};

PartialRound run_phases_1_to_3(const CoherenceBlock& block, const Constellation& c,
                               const ProtocolConfig& cfg = {});

/// phi^{-1}(phi(C_1^{h12}) + phi(C_1^{h13})) / sqrt(E_avg).
Complex phase4_broadcast(const FacilitatorState& node1, const Constellation& c);

/// MAP estimate of the broadcast QAM point under a uniform prior, i.e. the
/// nearest point to rx * sqrt(E_avg) / channel_est.
Complex map_decode_broadcast(Complex rx, Complex channel_est, double sigma2, const Constellation& c);

/// MAP estimate under an explicit prior over the QAM grid.
Complex map_decode_broadcast(Complex rx, Complex channel_est, double sigma2, const Constellation& c,
                             const QamPmf& prior);

/// phi^{-1}(phi(theta_hat) - phi(own_csr)).
Complex recover_csr(Complex theta_hat, Complex own_csr, const Constellation& c);

struct CsrSample {
  double value = 0.0;
  ChannelId channel = ChannelId::H12;
  Part part = Part::Real;
  int node = 1;
  std::size_t block_index = 0;
};

struct RoundResult {
  FacilitatorState node1;
  PeerState node2;
  PeerState node3;
  Complex broadcast;
  /// Ordered by node (1..3), then channel (h12, h13), then part (real, imag).
  std::array<CsrSample, 12> samples;

  const CsrSample& sample(int node, ChannelId ch, Part p) const {
    return samples[(node - 1) * 4 + static_cast<int>(ch) * 2 + static_cast<int>(p)];
  }
};

/// Full round. Throws DecodeFailure when a peer's channel estimate is zero.
RoundResult run_round(const CoherenceBlock& block, const Constellation& c,
                      std::size_t block_index = 0, const ProtocolConfig& cfg = {});

}  // namespace ogsk
