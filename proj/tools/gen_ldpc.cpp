/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// Writes a regular (wc, wr) LDPC parity-check matrix without 4-cycles in alist
// format. Columns are filled greedily with the least-loaded checks that keep
// the Tanner graph free of length-4 cycles; ties are broken by a seeded RNG.
//
//   ogsk_gen_ldpc N WC WR SEED > code.alist

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ogsk/recon.hpp"

namespace {

std::optional<ogsk::ParityCheckMatrix> attempt(std::size_t n, std::size_t wc, std::size_t wr,
                                               std::uint64_t seed) {
  const std::size_t m = n * wc / wr;
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> rows(m);
  // neighbours[c] marks checks sharing a variable with check c.
  std::vector<std::vector<std::uint8_t>> linked(m, std::vector<std::uint8_t>(m, 0));

  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> chosen;
    for (std::size_t d = 0; d < wc; ++d) {
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return rows[a].size() < rows[b].size(); });
      bool placed = false;
      for (std::size_t c : order) {
        if (rows[c].size() >= wr) continue;
        if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
        // Two checks already linked through another variable would close a 4-cycle.
        const bool cycle = std::any_of(chosen.begin(), chosen.end(), [&](std::size_t o) { return linked[c][o]; });
        if (cycle) continue;
        chosen.push_back(c);
        placed = true;
        break;
      }
      if (!placed) return std::nullopt;
    }
    for (std::size_t a : chosen) {
      rows[a].push_back(v);
      for (std::size_t b : chosen) {
        if (a != b) linked[a][b] = 1;
      }
    }
  }
  return ogsk::ParityCheckMatrix(n, std::move(rows));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: ogsk_gen_ldpc N WC WR SEED\n";
    return 2;
  }
  const std::size_t n = std::stoul(argv[1]);
  const std::size_t wc = std::stoul(argv[2]);
  const std::size_t wr = std::stoul(argv[3]);
  const std::uint64_t seed = std::stoull(argv[4]);
  if (wr == 0 || (n * wc) % wr != 0) {
    std::cerr << "N * WC must be divisible by WR\n";
    return 2;
  }
  for (std::uint64_t s = seed; s < seed + 1000; ++s) {
    if (auto h = attempt(n, wc, wr, s)) {
      ogsk::write_alist(std::cout, *h);
      std::cerr << "seed " << s << "\n";
      return 0;
    }
  }
  std::cerr << "no 4-cycle-free matrix found\n";
  return 1;
}
