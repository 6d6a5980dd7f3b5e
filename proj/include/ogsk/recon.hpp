/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Syndrome-based reconciliation with binary LDPC codes.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ogsk {

using BitVector = std::vector<std::uint8_t>;

class ParityCheckMatrix {
 public:
  /// `rows[i]` lists the (0-based) columns of check i. Throws Domain if a row
  /// or column is empty or an index is out of range.
  ParityCheckMatrix(std::size_t n, std::vector<std::vector<std::size_t>> rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t checks() const noexcept { return rows_.size(); }
  /// Nominal dimension N - (number of checks).
  std::size_t k() const noexcept { return n_ - rows_.size(); }

  const std::vector<std::vector<std::size_t>>& rows() const noexcept { return rows_; }
  const std::vector<std::vector<std::size_t>>& cols() const noexcept { return cols_; }

  friend bool operator==(const ParityCheckMatrix& a, const ParityCheckMatrix& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> rows_;
  std::vector<std::vector<std::size_t>> cols_;
};

/// alist format (MacKay): N M / max col and row degree / column degrees /
/// row degrees / N lines of 1-based row indices / M lines of 1-based column
/// indices, zero padding allowed. Errors carry the offending line number.
ParityCheckMatrix parse_alist(std::istream& in);
ParityCheckMatrix load_alist(const std::filesystem::path& path);
void write_alist(std::ostream& out, const ParityCheckMatrix& h);
std::string to_alist(const ParityCheckMatrix& h);

/// The bundled (12, 9) code.
ParityCheckMatrix default_code_12_9();

BitVector syndrome(std::span<const std::uint8_t> x, const ParityCheckMatrix& h);

struct DecodeResult {
  BitVector bits;
  bool converged = false;
  int iterations = 0;
};

/// Log-domain sum-product decoding towards the coset with syndrome `s`. LLRs
/// are log(P(0)/P(1)). Non-convergence is reported, not thrown; the bits are
/// then the last hard decisions.
DecodeResult decode_syndrome(std::span<const double> llrs, std::span<const std::uint8_t> s,
                             const ParityCheckMatrix& h, int max_iter = 50);

struct ReconcileStats {
  BitVector corrected;
  std::size_t bits = 0;
  std::size_t frames = 0;
  std::size_t converged_frames = 0;
  std::size_t pre_mismatches = 0;
  std::size_t post_mismatches = 0;
  std::size_t disclosed_bits = 0;
  double pre_rate() const noexcept { return bits ? double(pre_mismatches) / bits : 0.0; }
  double post_rate() const noexcept { return bits ? double(post_mismatches) / bits : 0.0; }
};

/// Splits node-1's key into N-bit frames, publishes each frame's syndrome and
/// decodes the peer's LLRs against it. The last frame is padded with known zero
/// bits (LLR +clamp) that are excluded from the statistics. `node_bits` are the
/// peer's own hard bits, used for the pre-reconciliation mismatch count.
ReconcileStats reconcile_block(std::span<const std::uint8_t> node1_bits,
                               std::span<const std::uint8_t> node_bits,
                               std::span<const double> node_llrs, const ParityCheckMatrix& h,
                               int max_iter = 50);

}  // namespace ogsk
