/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/recon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ogsk/error.hpp"
#include "ogsk/llr.hpp"

namespace ogsk {

ParityCheckMatrix::ParityCheckMatrix(std::size_t n, std::vector<std::vector<std::size_t>> rows)
    : n_(n), rows_(std::move(rows)), cols_(n) {
  if (n_ == 0 || rows_.empty()) throw Error(ErrorCode::Domain, "parity-check matrix is empty");
  if (rows_.size() >= n_) throw Error(ErrorCode::Domain, "parity-check matrix needs fewer rows than columns");
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    auto& row = rows_[r];
    if (row.empty()) throw Error(ErrorCode::Domain, "row " + std::to_string(r) + " is empty");
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw Error(ErrorCode::Domain, "row " + std::to_string(r) + " repeats a column");
    }
    for (std::size_t col : row) {
      if (col >= n_) throw Error(ErrorCode::Domain, "column index out of range in row " + std::to_string(r));
      cols_[col].push_back(r);
    }
  }
  for (std::size_t col = 0; col < n_; ++col) {
    if (cols_[col].empty()) throw Error(ErrorCode::Domain, "column " + std::to_string(col) + " is empty");
  }
}

namespace {

class AlistReader {
 public:
  explicit AlistReader(std::istream& in) : in_(in) {}

  std::vector<long> line(std::size_t expected_min, const char* what) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_no_;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ss(text);
      std::vector<long> values;
      std::string tok;
      while (ss >> tok) {
        try {
          std::size_t used = 0;
          values.push_back(std::stol(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          fail("non-integer token '" + tok + "' in " + what);
        }
      }
      if (values.size() < expected_min) fail(std::string("too few entries in ") + what);
      return values;
    }
    ++line_no_;
    fail(std::string("unexpected end of file while reading ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, "alist line " + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

ParityCheckMatrix parse_alist(std::istream& in) {
  AlistReader rd(in);
  const auto dims = rd.line(2, "dimensions");
  if (dims[0] <= 0 || dims[1] <= 0) rd.fail("dimensions must be positive");
  const auto n = static_cast<std::size_t>(dims[0]);
  const auto m = static_cast<std::size_t>(dims[1]);
  const auto maxdeg = rd.line(2, "maximum degrees");

  auto col_deg = rd.line(n, "column degrees");
  if (col_deg.size() != n) rd.fail("expected " + std::to_string(n) + " column degrees");
  auto row_deg = rd.line(m, "row degrees");
  if (row_deg.size() != m) rd.fail("expected " + std::to_string(m) + " row degrees");
  for (long d : col_deg) {
    if (d <= 0) rd.fail("column with zero degree");
    if (d > maxdeg[0]) rd.fail("column degree exceeds declared maximum");
  }
  for (long d : row_deg) {
    if (d <= 0) rd.fail("row with zero degree");
    if (d > maxdeg[1]) rd.fail("row degree exceeds declared maximum");
  }

  std::vector<std::vector<std::size_t>> col_lists(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto entries = rd.line(static_cast<std::size_t>(col_deg[j]), "column list");
    for (long v : entries) {
      if (v == 0) continue;
      if (v < 0 || static_cast<std::size_t>(v) > m) rd.fail("row index out of range");
      col_lists[j].push_back(static_cast<std::size_t>(v - 1));
    }
    if (col_lists[j].size() != static_cast<std::size_t>(col_deg[j])) {
      rd.fail("column " + std::to_string(j + 1) + " lists " + std::to_string(col_lists[j].size()) +
              " rows but its degree is " + std::to_string(col_deg[j]));
    }
  }
  std::vector<std::vector<std::size_t>> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto entries = rd.line(static_cast<std::size_t>(row_deg[i]), "row list");
    for (long v : entries) {
      if (v == 0) continue;
      if (v < 0 || static_cast<std::size_t>(v) > n) rd.fail("column index out of range");
      rows[i].push_back(static_cast<std::size_t>(v - 1));
    }
    if (rows[i].size() != static_cast<std::size_t>(row_deg[i])) {
      rd.fail("row " + std::to_string(i + 1) + " lists " + std::to_string(rows[i].size()) +
              " columns but its degree is " + std::to_string(row_deg[i]));
    }
  }

  ParityCheckMatrix h = [&] {
    try {
      return ParityCheckMatrix(n, rows);
    } catch (const Error& e) {
      rd.fail(e.what());
    }
  }();
  for (std::size_t j = 0; j < n; ++j) {
    auto listed = col_lists[j];
    std::sort(listed.begin(), listed.end());
    if (listed != h.cols()[j]) rd.fail("column " + std::to_string(j + 1) + " disagrees with the row lists");
  }
  return h;
}

ParityCheckMatrix load_alist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open alist file " + path.string());
  try {
    return parse_alist(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_alist(std::ostream& out, const ParityCheckMatrix& h) {
  std::size_t max_col = 0;
  std::size_t max_row = 0;
  for (const auto& c : h.cols()) max_col = std::max(max_col, c.size());
  for (const auto& r : h.rows()) max_row = std::max(max_row, r.size());
  out << h.n() << ' ' << h.checks() << '\n' << max_col << ' ' << max_row << '\n';
  auto degrees = [&](const auto& lists) {
    for (std::size_t i = 0; i < lists.size(); ++i) out << (i ? " " : "") << lists[i].size();
    out << '\n';
  };
  degrees(h.cols());
  degrees(h.rows());
  auto entries = [&](const auto& lists, std::size_t width) {
    for (const auto& list : lists) {
      for (std::size_t k = 0; k < width; ++k) {
        out << (k ? " " : "") << (k < list.size() ? list[k] + 1 : 0);
      }
      out << '\n';
    }
  };
  entries(h.cols(), max_col);
  entries(h.rows(), max_row);
}

std::string to_alist(const ParityCheckMatrix& h) {
  std::ostringstream ss;
  write_alist(ss, h);
  return ss.str();
}

ParityCheckMatrix default_code_12_9() {
  // Three weight-2 columns closing one 6-cycle, nine weight-1 columns; no
  // 4-cycles, so sum-product tracks bitwise MAP closely.
  return ParityCheckMatrix(12, {{0, 1, 3, 6, 9}, {0, 2, 4, 7, 10}, {1, 2, 5, 8, 11}});
}

BitVector syndrome(std::span<const std::uint8_t> x, const ParityCheckMatrix& h) {
  if (x.size() != h.n()) {
    throw Error(ErrorCode::Domain, "word length " + std::to_string(x.size()) +
                                       " does not match code length " + std::to_string(h.n()));
  }
  BitVector s(h.checks(), 0);
  for (std::size_t r = 0; r < h.checks(); ++r) {
    std::uint8_t acc = 0;
    for (std::size_t col : h.rows()[r]) acc ^= (x[col] & 1u);
    s[r] = acc;
  }
  return s;
}

DecodeResult decode_syndrome(std::span<const double> llrs, std::span<const std::uint8_t> s,
                             const ParityCheckMatrix& h, int max_iter) {
  if (llrs.size() != h.n()) throw Error(ErrorCode::Domain, "LLR vector length does not match code length");
  if (s.size() != h.checks()) throw Error(ErrorCode::Domain, "syndrome length does not match code");
  if (max_iter < 1) throw Error(ErrorCode::Domain, "max_iter must be at least 1");

  const auto& rows = h.rows();
  // Edge e of check r is the k-th entry of rows[r]; offsets index the flat arrays.
  std::vector<std::size_t> offset(rows.size() + 1, 0);
  for (std::size_t r = 0; r < rows.size(); ++r) offset[r + 1] = offset[r] + rows[r].size();
  std::vector<double> c2v(offset.back(), 0.0);
  std::vector<double> v2c(offset.back(), 0.0);
  std::vector<double> posterior(llrs.begin(), llrs.end());

  DecodeResult result;
  result.bits.assign(h.n(), 0);
  constexpr double kTanhLimit = 1.0 - 1e-15;

  for (int iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t e = offset[r]; e < offset[r + 1]; ++e) {
        v2c[e] = posterior[rows[r][e - offset[r]]] - c2v[e];
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t e = offset[r]; e < offset[r + 1]; ++e) {
        double prod = s[r] ? -1.0 : 1.0;
        for (std::size_t f = offset[r]; f < offset[r + 1]; ++f) {
          if (f != e) prod *= std::tanh(0.5 * v2c[f]);
        }
        prod = std::clamp(prod, -kTanhLimit, kTanhLimit);
        c2v[e] = 2.0 * std::atanh(prod);
      }
    }
    std::copy(llrs.begin(), llrs.end(), posterior.begin());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t e = offset[r]; e < offset[r + 1]; ++e) posterior[rows[r][e - offset[r]]] += c2v[e];
    }
    for (std::size_t j = 0; j < h.n(); ++j) result.bits[j] = posterior[j] < 0.0 ? 1 : 0;
    result.iterations = iter;
    if (syndrome(result.bits, h) == BitVector(s.begin(), s.end())) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

ReconcileStats reconcile_block(std::span<const std::uint8_t> node1_bits,
                               std::span<const std::uint8_t> node_bits,
                               std::span<const double> node_llrs, const ParityCheckMatrix& h,
                               int max_iter) {
  if (node1_bits.size() != node_llrs.size() || node_bits.size() != node_llrs.size()) {
    throw Error(ErrorCode::Domain, "key and LLR streams differ in length");
  }
  const std::size_t n = h.n();
  ReconcileStats st;
  st.bits = node1_bits.size();
  st.corrected.reserve(st.bits);
  for (std::size_t i = 0; i < st.bits; ++i) st.pre_mismatches += (node1_bits[i] != node_bits[i]);

  BitVector x(n);
  std::vector<double> llr(n);
  for (std::size_t start = 0; start < st.bits; start += n) {
    const std::size_t used = std::min(n, st.bits - start);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = j < used ? node1_bits[start + j] : 0;
      llr[j] = j < used ? node_llrs[start + j] : kLlrClamp;
    }
    const BitVector s = syndrome(x, h);
    const DecodeResult d = decode_syndrome(llr, s, h, max_iter);
    ++st.frames;
    st.converged_frames += d.converged;
    st.disclosed_bits += h.checks();
    for (std::size_t j = 0; j < used; ++j) {
      st.corrected.push_back(d.bits[j]);
      st.post_mismatches += (d.bits[j] != x[j]);
    }
  }
  return st;
}

}  // namespace ogsk
