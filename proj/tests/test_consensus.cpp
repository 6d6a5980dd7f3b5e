/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <algorithm>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "ogsk/consensus.hpp"

using namespace ogsk;

namespace {

std::array<NodeStreams, 3> random_streams(std::size_t n, std::uint64_t seed, const Constellation& c) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, c.side() - 1);
  std::array<NodeStreams, 3> s;
  for (auto& node : s) {
    for (std::size_t i = 0; i < n; ++i) {
      node.h12.push_back(c.pam_value(pick(rng)));
      node.h13.push_back(c.pam_value(pick(rng)));
    }
  }
  return s;
}

bool sorted_unique(const IndexSet& s) { return std::adjacent_find(s.begin(), s.end(), std::greater_equal<>()) == s.end(); }

}  // namespace

TEST_CASE("two-level quantizer") {
  const auto sign = GuardBandQuantizer::symmetric(0.0);
  CHECK(two_level_quantize(1.0, sign) == BitDecision::One);
  CHECK(two_level_quantize(-1.0, sign) == BitDecision::Zero);
  CHECK(two_level_quantize(0.0, sign) == BitDecision::NoConsensus);
  const auto q = GuardBandQuantizer::symmetric(1.0);
  CHECK(two_level_quantize(1.0, q) == BitDecision::NoConsensus);
  CHECK(two_level_quantize(-1.0, q) == BitDecision::NoConsensus);
  CHECK(two_level_quantize(-2.0, q) == BitDecision::Zero);
  CHECK(two_level_quantize(1.5, q) == BitDecision::One);
  CHECK_THROWS_AS((GuardBandQuantizer{-0.1, 0.0}).validate(), Error);
  CHECK_THROWS_AS((GuardBandQuantizer{0.5, 0.1}).validate(), Error);
  CHECK_NOTHROW((GuardBandQuantizer{0.5, -0.25}).validate());
}

TEST_CASE("hand-built three-block exchange") {
  // node-2 guards block 1 on h12, node-3 guards block 2 on h13.
  std::array<NodeStreams, 3> s;
  s[0] = {{3, -1, 1}, {-3, 1, 3}};
  s[1] = {{0.5, -1, 1}, {-3, 1, 3}};
  s[2] = {{3, -1, 1}, {-3, 0.25, 3}};
  const auto out = exchange_indices(s, GuardBandQuantizer::symmetric(0.75));
  CHECK(out.r_h12 == IndexSet{1, 2});
  CHECK(out.r_h13 == IndexSet{0, 2});
  CHECK(out.v == IndexSet{2});
  CHECK(out.exclusive_h12 == IndexSet{1});
  CHECK(out.exclusive_h13 == IndexSet{0});
  REQUIRE(out.transcript.size() == 3);
  CHECK(out.transcript[0].sender == 2);
  CHECK(out.transcript[1].sender == 1);
  CHECK(out.transcript[2].sender == 3);
  CHECK(out.transcript[0].h12 == IndexSet{1, 2});
  const auto j = nlohmann::json::parse(out.transcript_json());
  CHECK(j["messages"].size() == 3);
  CHECK(j["messages"][2]["sender"] == 3);
  CHECK(j["v"] == nlohmann::json::array({2}));
}

TEST_CASE("exchange invariants") {
  Constellation c(4);
  for (double q : {0.0, 1.0, 2.0}) {
    const auto s = random_streams(3000, 17 + std::size_t(q), c);
    const auto gq = GuardBandQuantizer::symmetric(q);
    const auto out = exchange_indices(s, gq, false);
    CHECK(out.transcript.empty());
    for (const IndexSet* set : {&out.r_h12, &out.r_h13, &out.v, &out.exclusive_h12, &out.exclusive_h13})
      CHECK(sorted_unique(*set));
    CHECK(std::includes(out.r_h12.begin(), out.r_h12.end(), out.v.begin(), out.v.end()));
    CHECK(std::includes(out.r_h13.begin(), out.r_h13.end(), out.v.begin(), out.v.end()));
    CHECK(out.exclusive_h12.size() + out.v.size() == out.r_h12.size());
    // Brute-force membership rule.
    for (std::size_t i = 0; i < 3000; ++i) {
      bool in12 = true, in13 = true;
      for (const auto& node : s) {
        in12 = in12 && !gq.in_band(node.h12[i]);
        in13 = in13 && !gq.in_band(node.h13[i]);
      }
      CHECK(std::binary_search(out.r_h12.begin(), out.r_h12.end(), i) == in12);
      CHECK(std::binary_search(out.r_h13.begin(), out.r_h13.end(), i) == in13);
    }
    // Membership never depends on signs.
    auto flipped = s;
    for (auto& node : flipped) {
      for (auto& v : node.h12) v = -v;
      for (std::size_t i = 0; i < node.h13.size(); i += 2) node.h13[i] = -node.h13[i];
    }
    const auto out2 = exchange_indices(flipped, gq, false);
    CHECK(out2.r_h12 == out.r_h12);
    CHECK(out2.r_h13 == out.r_h13);
    // Key-rate accounting.
    CHECK(out.exclusive_h12.size() + out.exclusive_h13.size() + out.v.size() >= out.r_h12.size());
    if (!out.exclusive_h13.empty())
      CHECK(out.exclusive_h12.size() + out.exclusive_h13.size() + out.v.size() > out.r_h12.size());
  }
  auto bad = random_streams(10, 1, c);
  bad[2].h13.pop_back();
  CHECK_THROWS_AS(exchange_indices(bad, GuardBandQuantizer::symmetric(0)), Error);
}

TEST_CASE("noiseless exchange keeps everything") {
  Constellation c(4);
  auto s = random_streams(100, 5, c);
  s[1] = s[0];
  s[2] = s[0];
  const auto out = exchange_indices(s, GuardBandQuantizer::symmetric(0));
  CHECK(out.v.size() == 100);
  const auto q = GuardBandQuantizer::symmetric(0);
  const auto b1 = extract_bits(s[0].h12, out.v, q);
  CHECK(b1 == extract_bits(s[2].h12, out.v, q));
  CHECK(b1.size() == 100);
  std::vector<double> neg(s[0].h12);
  for (auto& v : neg) v = -v;
  const auto nb = extract_bits(neg, out.v, q);
  for (std::size_t i = 0; i < nb.size(); ++i) CHECK(nb[i] == 1 - b1[i]);
  std::vector<double> with_zero{1.0, 0.0};
  CHECK_THROWS_AS(extract_bits(with_zero, IndexSet{0, 1}, q), Error);
}

TEST_CASE("guard band grid and profile calibration") {
  Constellation c(4);
  const auto grid = guard_band_grid(c);
  CHECK(grid.front() == 0.0);
  CHECK(grid[1] == 0.25);
  CHECK(grid.back() < c.max_amplitude());
  CHECK(grid.size() == 12);

  MismatchProfile p(c);
  // 100 samples at |1| with 10 disagreements at node-2, 100 clean samples at |3|.
  for (int i = 0; i < 100; ++i) p.add(1, i < 10 ? -1 : 1, 1);
  for (int i = 0; i < 100; ++i) p.add(3, 3, 3);
  CHECK(p.evaluate(0).in_consensus == 200);
  CHECK(p.evaluate(0).worst_rate() == doctest::Approx(0.05));
  CHECK(p.evaluate(1).in_consensus == 100);
  CHECK(p.evaluate(1).worst_rate() == 0.0);
  CHECK(calibrate_from_profile(p, 0.5, c).quantizer.q_plus == 0.0);
  CHECK(calibrate_from_profile(p, 0.05, c).quantizer.q_plus == 0.0);
  CHECK(calibrate_from_profile(p, 0.01, c).quantizer.q_plus == 1.0);
  CHECK_THROWS_AS(calibrate_from_profile(p, 0.0, c), Error);
  CHECK_THROWS_AS(calibrate_from_profile(p, 0.6, c), Error);

  MismatchProfile hopeless(c);
  for (int i = 0; i < 10; ++i) hopeless.add(3, -3, 3);
  try {
    calibrate_from_profile(hopeless, 0.1, c);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CalibrationFailure);
  }
  MismatchProfile merged(c);
  merged.merge(p);
  merged.merge(hopeless);
  CHECK(merged.evaluate(0).in_consensus == 210);
  CHECK_THROWS_AS(p.add(2, 2, 2), Error);
  CHECK_THROWS_AS(p.add(9, 9, 9), Error);
}

TEST_CASE("Monte Carlo calibration") {
  Constellation c(4);
  const double s2 = noise_variance(20);
  CHECK(calibrate_guard_bands(0.5, 30, noise_variance(30), c, 5000, 1).quantizer.q_plus == 0.0);

  // Monotone in the target.
  double prev = -1;
  for (double t : {0.3, 0.1, 0.07, 0.05}) {
    const auto r = calibrate_guard_bands(t, 20, s2, c, 20000, 3);
    CHECK(r.quantizer.q_plus >= prev);
    CHECK(r.mismatch <= t);
    prev = r.quantizer.q_plus;
  }

  // Deterministic and independent of the worker count.
  const auto a = calibrate_guard_bands(0.05, 20, s2, c, 20000, 9, {}, 1);
  const auto b = calibrate_guard_bands(0.05, 20, s2, c, 20000, 9, {}, 3);
  CHECK(a.quantizer.q_plus == b.quantizer.q_plus);
  CHECK(a.mismatch == b.mismatch);
  CHECK(a.consensus_samples == b.consensus_samples);

  // Golden values with unscaled estimates (gamma = sigma^2): at 20 dB the
  // broadcast errors keep the mismatch above 10^-2 for every band; at 30 dB
  // the first band beyond the inner points qualifies.
  CHECK_THROWS_AS(calibrate_guard_bands(0.01, 20, s2, c, 50000, 1), Error);
  const auto g30 = calibrate_guard_bands(0.01, 30, noise_variance(30), c, 50000, 1);
  CHECK(g30.quantizer.q_plus == 1.0);
}

TEST_CASE("calibrated band holds on a fresh validation run") {
  Constellation c(4);
  const double s2 = noise_variance(25);
  const auto cal = calibrate_guard_bands(0.05, 25, s2, c, 20000, 100);
  MismatchProfile fresh(c);
  for (std::size_t i = 0; i < 200000; ++i) {
    const auto r = run_round(draw_block(25, s2, derive_seed(200, i)), c, i);
    for (ChannelId ch : {ChannelId::H12, ChannelId::H13})
      for (Part p : {Part::Real, Part::Imag})
        fresh.add(r.sample(1, ch, p).value, r.sample(2, ch, p).value, r.sample(3, ch, p).value);
  }
  CHECK(fresh.evaluate(cal.quantizer.q_plus).worst_rate() <= 0.05 * 1.2);
}
