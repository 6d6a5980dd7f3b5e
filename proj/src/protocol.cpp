/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/protocol.hpp"

#include <cmath>
#include <limits>

namespace ogsk {

const char* to_string(ChannelId ch) noexcept { return ch == ChannelId::H12 ? "h12" : "h13"; }
const char* to_string(Part p) noexcept { return p == Part::Real ? "real" : "imag"; }

double equiprobable_csr_gain(const Constellation& c, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::Domain, "gamma must be non-negative");
  }
  // Only the sign survives quantization onto two points.
  if (c.side() == 2) return 1.0;
  const double sd = std::sqrt((1.0 + gamma) / 2.0);
  auto entropy = [&](double log_gain) {
    const double var = std::pow(std::exp(log_gain) * sd, 2);
    double h = 0.0;
    for (int t = 0; t < c.side(); ++t) {
      const double p = region_mass(0.0, var, t, c);
      if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
  };
  // Coarse log-spaced scan, then golden-section refinement around the best.
  const double lo = std::log(1e-2);
  const double hi = std::log(8.0 * c.side());
  constexpr int kScan = 400;
  int best = 0;
  double best_h = -1.0;
  for (int k = 0; k <= kScan; ++k) {
    const double h = entropy(lo + (hi - lo) * k / kScan);
    if (h > best_h) {
      best_h = h;
      best = k;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kScan;
  double b = lo + (hi - lo) * std::min(best + 1, kScan) / kScan;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100; ++it) {
    const double x1 = b - ratio * (b - a);
    const double x2 = a + ratio * (b - a);
    if (entropy(x1) >= entropy(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  return std::exp(0.5 * (a + b));
}

Complex PeerState::csr(ChannelId ch) const {
  if (ch == inherent_channel()) return inherent_csr;
  if (!decoded_csr) {
    throw Error(ErrorCode::ContractViolation,
                "node-" + std::to_string(node) + " has not decoded the broadcast yet");
  }
  return *decoded_csr;
}

bool PeerState::has_csr(ChannelId ch) const noexcept {
  return ch == inherent_channel() || decoded_csr.has_value();
}

PartialRound run_phases_1_to_3(const CoherenceBlock& b, const Constellation& c,
                               const ProtocolConfig& cfg) {
  const double g = cfg.csr_gain;
  auto q = [&](Complex est) { return quantize(g * est, c); };

  PartialRound r;
  r.node1 = FacilitatorState{q(b.est12_at_node1), q(b.est13_at_node1), b.est12_at_node1,
                             b.est13_at_node1};
  r.node2.node = 2;
  r.node2.inherent_csr = q(b.est12_at_node2);
  r.node2.inherent_est = b.est12_at_node2;
  r.node2.csr23 = q(b.est23_at_node2);
  r.node3.node = 3;
  r.node3.inherent_csr = q(b.est13_at_node3);
  r.node3.inherent_est = b.est13_at_node3;
  r.node3.csr23 = q(b.est23_at_node3);
  return r;
}

Complex phase4_broadcast(const FacilitatorState& node1, const Constellation& c) {
  const RingElement sum = ring_add(phi(node1.csr12, c), phi(node1.csr13, c));
  return phi_inv(sum, c) / std::sqrt(c.e_avg());
}

Complex map_decode_broadcast(Complex rx, Complex channel_est, double sigma2,
                             const Constellation& c) {
  (void)sigma2;  // the uniform-prior MAP rule does not depend on the noise level
  if (channel_est == Complex{0.0, 0.0}) {
    throw Error(ErrorCode::DecodeFailure, "channel estimate is zero; broadcast cannot be decoded");
  }
  return quantize(rx * std::sqrt(c.e_avg()) / channel_est, c);
}

Complex map_decode_broadcast(Complex rx, Complex channel_est, double sigma2, const Constellation& c,
                             const QamPmf& prior) {
  if (channel_est == Complex{0.0, 0.0}) {
    throw Error(ErrorCode::DecodeFailure, "channel estimate is zero; broadcast cannot be decoded");
  }
  if (prior.side() != c.side()) throw Error(ErrorCode::Domain, "prior does not match constellation");
  if (sigma2 <= 0.0) return map_decode_broadcast(rx, channel_est, sigma2, c);

  const double scale = 1.0 / std::sqrt(c.e_avg());
  double best = -std::numeric_limits<double>::infinity();
  Complex best_point = quantize(rx * std::sqrt(c.e_avg()) / channel_est, c);
  for (int a = 0; a < c.side(); ++a) {
    for (int b = 0; b < c.side(); ++b) {
      const double p = prior.at(a, b);
      if (p <= 0.0) continue;
      const Complex point{c.pam_value(a), c.pam_value(b)};
      const double score = std::log(p) - std::norm(rx - channel_est * point * scale) / sigma2;
      if (score > best) {
        best = score;
        best_point = point;
      }
    }
  }
  return best_point;
}

Complex recover_csr(Complex theta_hat, Complex own_csr, const Constellation& c) {
  return phi_inv(ring_sub(phi(theta_hat, c), phi(own_csr, c)), c);
}

namespace {

void decode_at_peer(PeerState& peer, Complex true_channel, Complex noise, Complex tx, double sigma2,
                    const Constellation& c, const ProtocolConfig& cfg) {
  peer.rx = true_channel * tx + noise;
  peer.theta_hat = cfg.map_prior
                       ? map_decode_broadcast(*peer.rx, peer.inherent_est, sigma2, c, *cfg.map_prior)
                       : map_decode_broadcast(*peer.rx, peer.inherent_est, sigma2, c);
  peer.decoded_csr = recover_csr(*peer.theta_hat, peer.inherent_csr, c);
}

}  // namespace

RoundResult run_round(const CoherenceBlock& b, const Constellation& c, std::size_t block_index,
                      const ProtocolConfig& cfg) {
  PartialRound partial = run_phases_1_to_3(b, c, cfg);
  RoundResult r;
  r.node1 = partial.node1;
  r.node2 = partial.node2;
  r.node3 = partial.node3;
  r.broadcast = phase4_broadcast(r.node1, c);

  decode_at_peer(r.node2, b.h12, b.noise4_at_node2, r.broadcast, b.noise_var, c, cfg);
  decode_at_peer(r.node3, b.h13, b.noise4_at_node3, r.broadcast, b.noise_var, c, cfg);

  std::size_t k = 0;
  auto emit = [&](int node, ChannelId ch, Complex csr) {
    for (Part p : {Part::Real, Part::Imag}) {
      r.samples[k++] = CsrSample{component(csr, p), ch, p, node, block_index};
    }
  };
  emit(1, ChannelId::H12, r.node1.csr12);
  emit(1, ChannelId::H13, r.node1.csr13);
  emit(2, ChannelId::H12, r.node2.csr(ChannelId::H12));
  emit(2, ChannelId::H13, r.node2.csr(ChannelId::H13));
  emit(3, ChannelId::H12, r.node3.csr(ChannelId::H12));
  emit(3, ChannelId::H13, r.node3.csr(ChannelId::H13));
  return r;
}

}  // namespace ogsk
