/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/channel.hpp"

#include <cmath>

namespace ogsk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kBlockStream = 0;

}  // namespace

double noise_variance(double snr_db) {
  if (!std::isfinite(snr_db)) throw Error(ErrorCode::Domain, "SNR must be finite");
  return std::pow(10.0, -snr_db / 10.0);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

Complex Rng::complex_normal(double var) {
  const double s = std::sqrt(var / 2.0);
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

Complex awgn(Complex signal, double sigma2, Rng& rng) {
  if (!(sigma2 >= 0.0)) throw Error(ErrorCode::Domain, "noise variance must be non-negative");
  if (sigma2 == 0.0) return signal;
  return signal + rng.complex_normal(sigma2);
}

CoherenceBlock draw_block_with_noise(double sigma2, double gamma, std::uint64_t block_seed) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::Domain, "estimation error variance gamma must be >= 0");
  }
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::Domain, "noise variance must be >= 0");
  }
  CoherenceBlock b;
  b.noise_var = sigma2;
  b.gamma = gamma;

  // One engine per block with a fixed draw order. Unit-variance draws scaled
  // afterwards keep the realisation aligned across gamma and sigma2.
  Rng rng(derive_seed(block_seed, kBlockStream));
  auto unit = [&rng] { return rng.complex_normal(1.0); };
  b.h12 = unit();
  b.h13 = unit();
  b.h23 = unit();

  const double est_sd = std::sqrt(gamma);
  const double noise_sd = std::sqrt(sigma2);
  b.est12_at_node1 = b.h12 + est_sd * unit();
  b.est13_at_node1 = b.h13 + est_sd * unit();
  b.est12_at_node2 = b.h12 + est_sd * unit();
  b.est23_at_node2 = b.h23 + est_sd * unit();
  b.noise4_at_node2 = noise_sd * unit();
  b.est13_at_node3 = b.h13 + est_sd * unit();
  b.est23_at_node3 = b.h23 + est_sd * unit();
  b.noise4_at_node3 = noise_sd * unit();
  return b;
}

CoherenceBlock draw_block(double snr_db, double gamma, std::uint64_t block_seed) {
  return draw_block_with_noise(noise_variance(snr_db), gamma, block_seed);
}

}  // namespace ogsk
