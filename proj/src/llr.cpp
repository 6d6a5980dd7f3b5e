/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/llr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ogsk/channel.hpp"
#include "ogsk/selection.hpp"

namespace ogsk {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double clamp_llr(double llr) { return std::clamp(llr, -kLlrClamp, kLlrClamp); }

double llr_from_masses(double p0, double p1) {
  if (p0 <= 0.0 && p1 <= 0.0) throw Error(ErrorCode::UndefinedLlr, "both bit hypotheses have zero mass");
  if (p1 <= 0.0) return kLlrClamp;
  if (p0 <= 0.0) return -kLlrClamp;
  return clamp_llr(std::log(p0 / p1));
}

double region_lo(int t, const Constellation& c) {
  return t == 0 ? -std::numeric_limits<double>::infinity() : c.pam_value(t) - 1.0;
}
double region_hi(int t, const Constellation& c) {
  return t == c.side() - 1 ? std::numeric_limits<double>::infinity() : c.pam_value(t) + 1.0;
}

}  // namespace

JointPmfTable::JointPmfTable(int side, std::vector<double> mass, bool monte_carlo)
    : side_(side), mass_(std::move(mass)), monte_carlo_(monte_carlo) {
  if (side < 2 || mass_.size() != static_cast<std::size_t>(side) * side) {
    throw Error(ErrorCode::Domain, "joint PMF table must hold side*side entries");
  }
}

double JointPmfTable::total() const noexcept {
  return std::accumulate(mass_.begin(), mass_.end(), 0.0);
}

JointPmfTable build_joint_pmf(double gamma, const Constellation& c, double csr_gain) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::Domain, "gamma must be non-negative");
  }
  if (!(csr_gain > 0.0)) throw Error(ErrorCode::Domain, "CSR gain must be positive");
  const int n = c.side();
  const double g2 = csr_gain * csr_gain;
  const double var_u = g2 * (1.0 + gamma) / 2.0;  // each scaled estimate, per dimension
  const double cov = g2 / 2.0;
  const double rho = cov / var_u;
  const double var_cond = var_u - cov * cov / var_u;
  const double sd_u = std::sqrt(var_u);
  const double sd_cond = std::sqrt(std::max(var_cond, 0.0));
  const double reach = c.max_amplitude() + 14.0 * sd_u;

  std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> conditional(n);
  const double step_target = std::max(1e-3, 0.25 * std::min(sd_u, sd_cond > 0 ? sd_cond : sd_u));

  for (int s = 0; s < n; ++s) {
    const double lo = std::max(region_lo(s, c), -reach);
    const double hi = std::min(region_hi(s, c), reach);
    if (hi <= lo) continue;
    if (sd_cond == 0.0) {
      // Identical estimates: Y equals X.
      mass[static_cast<std::size_t>(s) * n + s] = region_mass(0.0, var_u, s, c);
      continue;
    }
    const int pieces = std::clamp(static_cast<int>(std::ceil((hi - lo) / step_target)), 4, 1 << 16);
    const double width = (hi - lo) / pieces;
    for (int k = 0; k < pieces; ++k) {
      const double a = lo + k * width;
      for (std::size_t j = 0; j < kGlNodes.size(); ++j) {
        const double u = a + 0.5 * width * (kGlNodes[j] + 1.0);
        const double density = std::exp(-0.5 * u * u / var_u) / (sd_u * std::sqrt(2.0 * std::numbers::pi));
        const double w = 0.5 * width * kGlWeights[j] * density;
        for (int t = 0; t < n; ++t) {
          mass[static_cast<std::size_t>(s) * n + t] += w * region_mass(rho * u, var_cond, t, c);
        }
      }
    }
  }
  return JointPmfTable(n, std::move(mass), false);
}

JointPmfTable build_joint_pmf_monte_carlo(double gamma, const Constellation& c, double csr_gain,
                                          std::size_t draws, std::uint64_t seed) {
  if (draws == 0) throw Error(ErrorCode::Domain, "Monte Carlo table needs at least one draw");
  const int n = c.side();
  std::vector<double> counts(static_cast<std::size_t>(n) * n, 0.0);
  Rng rng(seed);
  const double sd_h = std::sqrt(0.5);
  const double sd_e = std::sqrt(gamma / 2.0);
  for (std::size_t i = 0; i < draws; ++i) {
    const double h = sd_h * rng.normal();
    const double x = csr_gain * (h + sd_e * rng.normal());
    const double y = csr_gain * (h + sd_e * rng.normal());
    counts[static_cast<std::size_t>(c.nearest_index(x)) * n + c.nearest_index(y)] += 1.0;
  }
  for (double& v : counts) v /= static_cast<double>(draws);
  return JointPmfTable(n, std::move(counts), true);
}

double llr_reciprocal(double p, const JointPmfTable& table, const Constellation& c,
                      const GuardBandQuantizer& q) {
  if (table.side() != c.side()) throw Error(ErrorCode::Domain, "table does not match constellation");
  const int t = c.pam_index(p);
  double p0 = 0.0;
  double p1 = 0.0;
  for (int s = 0; s < c.side(); ++s) {
    switch (two_level_quantize(c.pam_value(s), q)) {
      case BitDecision::Zero: p0 += table.at(s, t); break;
      case BitDecision::One: p1 += table.at(s, t); break;
      case BitDecision::NoConsensus: break;
    }
  }
  return llr_from_masses(p0, p1);
}

Pmf csr_prior(double gamma, const Constellation& c, double csr_gain, const GuardBandQuantizer& q) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::Domain, "gamma must be non-negative");
  const Pmf full = induce_pmf(0.0, csr_gain * csr_gain * (1.0 + gamma) / 2.0, c);
  std::vector<double> mass(full.size());
  double total = 0.0;
  for (std::size_t t = 0; t < full.size(); ++t) {
    if (!q.in_band(full.support()[t])) {
      mass[t] = full[t];
      total += full[t];
    }
  }
  if (total <= 0.0) throw Error(ErrorCode::Domain, "every PAM point lies inside the guard band");
  for (double& v : mass) v /= total;
  return Pmf({full.support().begin(), full.support().end()}, std::move(mass));
}

double llr_decoding(double own_csr_sample, double own_other_csr, Complex channel_est,
                    double sigma2, const Pmf& prior, const Constellation& c,
                    const GuardBandQuantizer& q) {
  if (channel_est == Complex{0.0, 0.0}) {
    throw Error(ErrorCode::UndefinedLlr, "channel estimate is zero");
  }
  if (prior.size() != static_cast<std::size_t>(c.side())) {
    throw Error(ErrorCode::Domain, "prior does not match constellation");
  }
  const int n = c.side();
  const int observed = c.pam_index(own_csr_sample);
  const int shift = c.pam_index(own_other_csr);
  const double var = std::max(equalized_variance_per_dim(c, sigma2, channel_est), 1e-300);

  double p0 = 0.0;
  double p1 = 0.0;
  for (int u = 0; u < n; ++u) {
    const BitDecision bit = two_level_quantize(c.pam_value(u), q);
    if (bit == BitDecision::NoConsensus || prior[u] == 0.0) continue;
    const double mu = c.pam_value((u + shift) % n);
    // Reading the left-shifted PMF at `observed` is reading the unshifted one
    // at observed + shift.
    const double likelihood = region_mass(mu, var, (observed + shift) % n, c);
    (bit == BitDecision::Zero ? p0 : p1) += prior[u] * likelihood;
  }
  return llr_from_masses(p0, p1);
}

}  // namespace ogsk
