/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "json.hpp"
#include "parallel.hpp"

namespace ogsk {

GuardBandQuantizer GuardBandQuantizer::symmetric(double q) {
  GuardBandQuantizer g{q, -q};
  g.validate();
  return g;
}

void GuardBandQuantizer::validate() const {
  if (!(q_minus <= 0.0 && 0.0 <= q_plus) || !std::isfinite(q_minus) || !std::isfinite(q_plus)) {
    throw Error(ErrorCode::Domain, "guard band must satisfy q_minus <= 0 <= q_plus");
  }
}

BitDecision two_level_quantize(double alpha, const GuardBandQuantizer& q) {
  if (alpha > q.q_plus) return BitDecision::One;
  if (alpha < q.q_minus) return BitDecision::Zero;
  return BitDecision::NoConsensus;
}

namespace {

IndexSet out_of_band(const std::vector<double>& samples, const GuardBandQuantizer& q) {
  IndexSet out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!q.in_band(samples[i])) out.push_back(i);
  }
  return out;
}

IndexSet intersect(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

ConsensusOutcome exchange_indices(const std::array<NodeStreams, 3>& nodes,
                                  const GuardBandQuantizer& q, bool record_transcript) {
  q.validate();
  const std::size_t n = nodes[0].h12.size();
  for (const auto& s : nodes) {
    if (s.h12.size() != n || s.h13.size() != n) {
      throw Error(ErrorCode::Domain, "CSR streams of the three nodes differ in length");
    }
  }

  ConsensusOutcome out;
  // node-2 -> node-1
  const IndexSet n2_12 = out_of_band(nodes[1].h12, q);
  const IndexSet n2_13 = out_of_band(nodes[1].h13, q);
  // node-1 -> all: agreement with node-2
  const IndexSet n12_12 = intersect(out_of_band(nodes[0].h12, q), n2_12);
  const IndexSet n12_13 = intersect(out_of_band(nodes[0].h13, q), n2_13);
  // node-3 -> all: final consensus sets
  out.r_h12 = intersect(out_of_band(nodes[2].h12, q), n12_12);
  out.r_h13 = intersect(out_of_band(nodes[2].h13, q), n12_13);

  out.v = intersect(out.r_h12, out.r_h13);
  out.exclusive_h12 = difference(out.r_h12, out.v);
  out.exclusive_h13 = difference(out.r_h13, out.v);

  if (record_transcript) {
    out.transcript.push_back({2, "out-of-band indices at node-2", n2_12, n2_13});
    out.transcript.push_back({1, "indices in consensus with node-2", n12_12, n12_13});
    out.transcript.push_back({3, "indices in consensus at all nodes", out.r_h12, out.r_h13});
  }
  return out;
}

std::string ConsensusOutcome::transcript_json() const {
  nlohmann::ordered_json j;
  j["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : transcript) {
    j["messages"].push_back({{"sender", m.sender},
                             {"description", m.description},
                             {"h12", m.h12},
                             {"h13", m.h13}});
  }
  j["v"] = v;
  return j.dump();
}

std::vector<std::uint8_t> extract_bits(std::span<const double> samples, const IndexSet& indices,
                                       const GuardBandQuantizer& q) {
  std::vector<std::uint8_t> bits;
  bits.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= samples.size()) throw Error(ErrorCode::ContractViolation, "index beyond sample stream");
    switch (two_level_quantize(samples[i], q)) {
      case BitDecision::One: bits.push_back(1); break;
      case BitDecision::Zero: bits.push_back(0); break;
      case BitDecision::NoConsensus:
        throw Error(ErrorCode::ContractViolation,
                    "sample " + std::to_string(i) + " is inside the guard band");
    }
  }
  return bits;
}

MismatchProfile::MismatchProfile(const Constellation& c)
    : side_(c.side()), count_(c.side() / 2, 0), mis12_(c.side() / 2, 0), mis13_(c.side() / 2, 0) {}

void MismatchProfile::add(double v1, double v2, double v3) {
  const double smallest = std::min({std::abs(v1), std::abs(v2), std::abs(v3)});
  // PAM magnitudes are odd integers 1, 3, ..., side-1.
  const auto bucket = static_cast<std::size_t>(std::lround((smallest - 1.0) / 2.0));
  if (bucket >= count_.size() || smallest != 2.0 * double(bucket) + 1.0) throw Error(ErrorCode::Domain, "sample is not a PAM point");
  ++count_[bucket];
  if ((v1 > 0) != (v2 > 0)) ++mis12_[bucket];
  if ((v1 > 0) != (v3 > 0)) ++mis13_[bucket];
}

void MismatchProfile::merge(const MismatchProfile& other) {
  for (std::size_t k = 0; k < count_.size(); ++k) {
    count_[k] += other.count_[k];
    mis12_[k] += other.mis12_[k];
    mis13_[k] += other.mis13_[k];
  }
}

double MismatchProfile::Point::worst_rate() const noexcept {
  if (in_consensus == 0) return 1.0;
  return static_cast<double>(std::max(mismatches_12, mismatches_13)) / in_consensus;
}

MismatchProfile::Point MismatchProfile::evaluate(double q) const {
  Point p;
  for (std::size_t k = 0; k < count_.size(); ++k) {
    const double magnitude = 2.0 * k + 1.0;
    if (magnitude > q) {
      p.in_consensus += count_[k];
      p.mismatches_12 += mis12_[k];
      p.mismatches_13 += mis13_[k];
    }
  }
  return p;
}

std::vector<double> guard_band_grid(const Constellation& c) {
  std::vector<double> grid;
  const double step = c.d_min() / 8.0;
  for (int k = 0; k * step < c.max_amplitude(); ++k) grid.push_back(k * step);
  return grid;
}

CalibrationResult calibrate_from_profile(const MismatchProfile& profile, double target,
                                         const Constellation& c) {
  if (!(target > 0.0 && target <= 0.5)) {
    throw Error(ErrorCode::Domain, "target initial error rate must be in (0, 0.5]");
  }
  const auto all = profile.evaluate(-1.0);
  for (double q : guard_band_grid(c)) {
    const auto point = profile.evaluate(q);
    if (point.in_consensus > 0 && point.worst_rate() <= target) {
      return CalibrationResult{GuardBandQuantizer::symmetric(q), point.worst_rate(),
                               point.in_consensus, all.in_consensus};
    }
  }
  throw Error(ErrorCode::CalibrationFailure,
              "no guard band on the grid reaches the target initial error rate " +
                  std::to_string(target));
}

CalibrationResult calibrate_guard_bands(double target, double snr_db, double gamma,
                                        const Constellation& c, std::size_t n_blocks,
                                        std::uint64_t seed, const ProtocolConfig& cfg,
                                        unsigned threads) {
  if (n_blocks == 0) throw Error(ErrorCode::Domain, "calibration needs at least one block");
  if (!(target > 0.0 && target <= 0.5)) {
    throw Error(ErrorCode::Domain, "target initial error rate must be in (0, 0.5]");
  }
  constexpr std::size_t chunk = 4096;
  std::vector<MismatchProfile> partial((n_blocks + chunk - 1) / chunk, MismatchProfile(c));
  detail::parallel_chunks(n_blocks, threads, chunk, [&](std::size_t k, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const CoherenceBlock block = draw_block(snr_db, gamma, derive_seed(seed, i));
      RoundResult r;
      try {
        r = run_round(block, c, i, cfg);
      } catch (const Error& err) {
        if (err.code() == ErrorCode::DecodeFailure) continue;
        throw;
      }
      for (ChannelId ch : {ChannelId::H12, ChannelId::H13}) {
        for (Part p : {Part::Real, Part::Imag}) {
          partial[k].add(r.sample(1, ch, p).value, r.sample(2, ch, p).value,
                         r.sample(3, ch, p).value);
        }
      }
    }
  });
  MismatchProfile total(c);
  for (const auto& p : partial) total.merge(p);
  return calibrate_from_profile(total, target, c);
}

}  // namespace ogsk
