/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ogsk/leakage.hpp"
#include "ogsk/llr.hpp"
#include "ogsk/selection.hpp"
#include "parallel.hpp"

namespace ogsk {

// ---------------------------------------------------------------------------
// Names and options

const char* to_string(SelectionMode mode) noexcept {
  switch (mode) {
    case SelectionMode::Likelihood: return "likelihood";
    case SelectionMode::Strength: return "strength";
    case SelectionMode::FixedH12: return "fixed_h12";
  }
  return "?";
}

const char* to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::KeyRate: return "keyrate";
    case Experiment::Selection: return "selection";
    case Experiment::Reconcile: return "reconcile";
    case Experiment::Leakage: return "leakage";
    case Experiment::Calibrate: return "calibrate";
  }
  return "?";
}

SelectionMode parse_selection_mode(std::string_view s) {
  if (s == "likelihood") return SelectionMode::Likelihood;
  if (s == "strength") return SelectionMode::Strength;
  if (s == "fixed_h12" || s == "fixed") return SelectionMode::FixedH12;
  throw Error(ErrorCode::Config, "unknown selection mode '" + std::string(s) + "'");
}

OutputFormat parse_output_format(std::string_view s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw Error(ErrorCode::Config, "unknown output format '" + std::string(s) + "'");
}

Experiment parse_experiment(std::string_view s) {
  for (Experiment e : {Experiment::KeyRate, Experiment::Selection, Experiment::Reconcile,
                       Experiment::Leakage, Experiment::Calibrate}) {
    if (s == to_string(e)) return e;
  }
  throw Error(ErrorCode::Config, "unknown experiment '" + std::string(s) + "'");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::Config, "invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  const std::string t(text);
  while (start <= t.size()) {
    const auto comma = t.find(',', start);
    const std::string item = trim(std::string_view(t).substr(start, comma - start));
    if (!item.empty()) out.push_back(parse_number<double>(key, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw Error(ErrorCode::Config, std::string(key) + " needs at least one value");
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw Error(ErrorCode::Config, "invalid boolean '" + t + "' for " + std::string(key));
}

}  // namespace

void apply_option(ExperimentConfig& cfg, std::string_view raw_key, std::string_view value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "m") {
    cfg.m = parse_number<int>(key, value);
  } else if (key == "snr") {
    cfg.snr_db = parse_list(key, value);
  } else if (key == "gamma") {
    const std::string v = trim(value);
    if (v == "tied" || v == "auto") {
      cfg.gamma.reset();
    } else {
      cfg.gamma = parse_number<double>(key, v);
    }
  } else if (key == "ier") {
    cfg.initial_error_rates = parse_list(key, value);
  } else if (key == "blocks") {
    cfg.n_blocks = parse_number<std::size_t>(key, value);
  } else if (key == "calib-blocks") {
    cfg.calib_blocks = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "mode") {
    cfg.selection_mode = parse_selection_mode(trim(value));
  } else if (key == "ldpc-matrix") {
    cfg.ldpc_matrix = trim(value);
  } else if (key == "max-iter") {
    cfg.max_iter = parse_number<int>(key, value);
  } else if (key == "csr-gain") {
    const std::string v = trim(value);
    if (v == "auto" || v == "equiprobable") {
      cfg.csr_gain.reset();
    } else {
      cfg.csr_gain = parse_number<double>(key, v);
    }
  } else if (key == "map-prior") {
    const std::string v = trim(value);
    if (v == "uniform") {
      cfg.true_prior_map = false;
    } else if (v == "true" || v == "quantized-gaussian") {
      cfg.true_prior_map = true;
    } else {
      throw Error(ErrorCode::Config, "map-prior must be 'uniform' or 'true'");
    }
  } else if (key == "out") {
    cfg.out = trim(value);
  } else if (key == "format") {
    cfg.format = parse_output_format(trim(value));
  } else if (key == "reproducible") {
    cfg.reproducible = parse_bool(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_number<unsigned>(key, value);
  } else {
    throw Error(ErrorCode::Config, "unknown option '" + std::string(raw_key) + "'");
  }
}

void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find_first_of("#;");
    const std::string text = trim(std::string_view(line).substr(0, hash));
    if (text.empty() || text.front() == '[') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Config, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_option(cfg, text.substr(0, eq), text.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void ExperimentConfig::validate() const {
  if (m < 2 || m % 2 != 0 || m > 16) throw Error(ErrorCode::Config, "m must be even and in [2, 16]");
  if (snr_db.empty()) throw Error(ErrorCode::Config, "SNR list is empty");
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw Error(ErrorCode::Config, "SNR values must be finite");
  }
  if (initial_error_rates.empty()) throw Error(ErrorCode::Config, "initial error rate list is empty");
  for (double t : initial_error_rates) {
    if (!(t > 0.0 && t <= 0.5)) throw Error(ErrorCode::Config, "initial error rates must be in (0, 0.5]");
  }
  if (n_blocks < 1) throw Error(ErrorCode::Config, "blocks must be at least 1");
  if (gamma && !(*gamma >= 0.0)) throw Error(ErrorCode::Config, "gamma must be non-negative");
  if (csr_gain && !(*csr_gain > 0.0)) throw Error(ErrorCode::Config, "csr-gain must be positive");
  if (max_iter < 1) throw Error(ErrorCode::Config, "max-iter must be at least 1");
}

const ResultRow* ResultTable::find(std::string_view metric, std::string_view mode, double snr_db,
                                   std::optional<double> target) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.mode == mode && r.snr_db == snr_db &&
        (!target || (r.target_ier && *r.target_ier == *target))) {
      return &r;
    }
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Simulation shared by the experiments

namespace {

enum : std::uint64_t { kDataStream = 0xda7a, kCalibStream = 0xca1b, kShuffleStream = 0x5f1e };

struct PointContext {
  Constellation c;
  double snr_db;
  double sigma2;
  double gamma;
  double gain;
  ProtocolConfig proto;
};

PointContext make_point(const ExperimentConfig& cfg, double snr_db) {
  Constellation c(cfg.m);
  const double sigma2 = noise_variance(snr_db);
  const double gamma = cfg.gamma.value_or(sigma2);
  const double gain = cfg.csr_gain.value_or(equiprobable_csr_gain(c, gamma));
  PointContext p{c, snr_db, sigma2, gamma, gain, ProtocolConfig{}};
  p.proto.csr_gain = gain;
  if (cfg.true_prior_map) {
    const Pmf per_dim = induce_pmf(0.0, gain * gain * (1.0 + gamma) / 2.0, c);
    const QamPmf csr = product_pmf(per_dim, per_dim);
    p.proto.map_prior = ring_convolve(csr, csr);
  }
  return p;
}

struct BlockRecord {
  std::array<double, 12> samples{};  // RoundResult::samples order
  FacilitatorState node1{};
  Complex est2_12{};
  Complex est3_13{};
  bool valid = false;

  double value(int node, ChannelId ch, Part p) const {
    return samples[(node - 1) * 4 + static_cast<int>(ch) * 2 + static_cast<int>(p)];
  }
};

std::vector<BlockRecord> simulate(const PointContext& pt, std::size_t n, std::uint64_t master,
                                  unsigned threads) {
  std::vector<BlockRecord> out(n);
  detail::parallel_chunks(n, threads, 2048, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const CoherenceBlock block = draw_block_with_noise(pt.sigma2, pt.gamma, derive_seed(master, i));
      try {
        const RoundResult r = run_round(block, pt.c, i, pt.proto);
        BlockRecord& rec = out[i];
        for (std::size_t k = 0; k < 12; ++k) rec.samples[k] = r.samples[k].value;
        rec.node1 = r.node1;
        rec.est2_12 = r.node2.inherent_est;
        rec.est3_13 = r.node3.inherent_est;
        rec.valid = true;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::DecodeFailure) throw;
      }
    }
  });
  return out;
}

// Sample index 2 * block + part. Discarded blocks contribute 0, which every
// guard band excludes.
std::array<NodeStreams, 3> to_streams(const std::vector<BlockRecord>& recs) {
  std::array<NodeStreams, 3> s;
  for (auto& node : s) {
    node.h12.assign(2 * recs.size(), 0.0);
    node.h13.assign(2 * recs.size(), 0.0);
  }
  for (std::size_t b = 0; b < recs.size(); ++b) {
    if (!recs[b].valid) continue;
    for (int node = 1; node <= 3; ++node) {
      for (Part p : {Part::Real, Part::Imag}) {
        const std::size_t i = 2 * b + static_cast<std::size_t>(p);
        s[node - 1].h12[i] = recs[b].value(node, ChannelId::H12, p);
        s[node - 1].h13[i] = recs[b].value(node, ChannelId::H13, p);
      }
    }
  }
  return s;
}

MismatchProfile profile_of(const std::vector<BlockRecord>& recs, const Constellation& c) {
  MismatchProfile prof(c);
  for (const auto& r : recs) {
    if (!r.valid) continue;
    for (ChannelId ch : {ChannelId::H12, ChannelId::H13})
      for (Part p : {Part::Real, Part::Imag})
        prof.add(r.value(1, ch, p), r.value(2, ch, p), r.value(3, ch, p));
  }
  return prof;
}

struct KeyPosition {
  std::size_t index;  // 2 * block + part
  ChannelId channel;

  std::size_t block() const { return index / 2; }
  Part part() const { return index % 2 ? Part::Imag : Part::Real; }
};

ChannelId choose(SelectionMode mode, const PointContext& pt, const GuardBandQuantizer& q,
                 const BlockRecord& rec, std::span<const Part> parts) {
  switch (mode) {
    case SelectionMode::Likelihood: return select_csr(rec.node1, pt.c, q, pt.sigma2, parts);
    case SelectionMode::Strength: return select_csr_by_strength(rec.node1);
    case SelectionMode::FixedH12: return ChannelId::H12;
  }
  return ChannelId::H12;
}

// Selection decisions for every index in V. One decision per block when both
// parts of the block are in V, otherwise per sample.
std::map<std::size_t, ChannelId> select_on_v(const IndexSet& v, SelectionMode mode,
                                              const PointContext& pt, const GuardBandQuantizer& q,
                                              const std::vector<BlockRecord>& recs) {
  std::map<std::size_t, ChannelId> out;
  for (std::size_t k = 0; k < v.size();) {
    const std::size_t block = v[k] / 2;
    std::vector<Part> parts;
    std::size_t j = k;
    while (j < v.size() && v[j] / 2 == block) {
      parts.push_back(v[j] % 2 ? Part::Imag : Part::Real);
      ++j;
    }
    const ChannelId ch = choose(mode, pt, q, recs[block], parts);
    for (std::size_t t = k; t < j; ++t) out[v[t]] = ch;
    k = j;
  }
  return out;
}

std::vector<KeyPosition> assemble_key(const ConsensusOutcome& cons, SelectionMode mode,
                                      const PointContext& pt, const GuardBandQuantizer& q,
                                      const std::vector<BlockRecord>& recs) {
  std::vector<KeyPosition> key;
  if (mode == SelectionMode::FixedH12) {
    for (std::size_t i : cons.r_h12) key.push_back({i, ChannelId::H12});
    return key;
  }
  for (std::size_t i : cons.exclusive_h12) key.push_back({i, ChannelId::H12});
  for (std::size_t i : cons.exclusive_h13) key.push_back({i, ChannelId::H13});
  for (const auto& [i, ch] : select_on_v(cons.v, mode, pt, q, recs)) key.push_back({i, ch});
  std::sort(key.begin(), key.end(), [](const KeyPosition& a, const KeyPosition& b) { return a.index < b.index; });
  return key;
}

std::uint8_t bit_at(const BlockRecord& rec, int node, const KeyPosition& pos, const GuardBandQuantizer& q) {
  const double v = rec.value(node, pos.channel, pos.part());
  const BitDecision d = two_level_quantize(v, q);
  if (d == BitDecision::NoConsensus) {
    throw Error(ErrorCode::ContractViolation, "key position inside the guard band");
  }
  return d == BitDecision::One ? 1 : 0;
}

struct MismatchCount {
  std::size_t positions = 0;
  std::size_t any = 0;  // positions where not all three nodes agree
  std::size_t n12 = 0;
  std::size_t n13 = 0;
  double rate() const { return positions ? static_cast<double>(any) / positions : 0.0; }
};

MismatchCount count_mismatch(const std::vector<KeyPosition>& key, const std::vector<BlockRecord>& recs,
                             const GuardBandQuantizer& q) {
  MismatchCount m;
  for (const auto& pos : key) {
    const auto& rec = recs[pos.block()];
    const auto b1 = bit_at(rec, 1, pos, q);
    const bool d2 = bit_at(rec, 2, pos, q) != b1;
    const bool d3 = bit_at(rec, 3, pos, q) != b1;
    ++m.positions;
    m.n12 += d2;
    m.n13 += d3;
    m.any += (d2 || d3);
  }
  return m;
}

class TableBuilder {
 public:
  TableBuilder(const ExperimentConfig& cfg, std::string experiment)
      : cfg_(cfg), experiment_(std::move(experiment)) {}

  void add(double snr, std::optional<double> target, std::string mode, std::string metric,
           double value, std::uint64_t n) {
    table_.rows.push_back(ResultRow{experiment_, cfg_.m, snr, target, std::move(mode),
                                    std::move(metric), value, n, cfg_.seed});
  }
  ResultTable& table() { return table_; }

 private:
  const ExperimentConfig& cfg_;
  std::string experiment_;
  ResultTable table_;
};

std::size_t calib_blocks(const ExperimentConfig& cfg) {
  return cfg.calib_blocks ? cfg.calib_blocks : cfg.n_blocks;
}

// Calibrates every target at one SNR point from a shared calibration run.
std::vector<std::optional<CalibrationResult>> calibrate_targets(const ExperimentConfig& cfg,
                                                                const PointContext& pt,
                                                                ResultTable& table) {
  const auto recs = simulate(pt, calib_blocks(cfg), derive_seed(cfg.seed, kCalibStream), cfg.threads);
  const MismatchProfile prof = profile_of(recs, pt.c);
  std::vector<std::optional<CalibrationResult>> out;
  for (double target : cfg.initial_error_rates) {
    ++table.calibration_points;
    try {
      out.push_back(calibrate_from_profile(prof, target, pt.c));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CalibrationFailure) throw;
      ++table.calibration_failures;
      out.push_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Experiments

ResultTable run_keyrate_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  TableBuilder tb(cfg, "keyrate");
  for (double snr : cfg.snr_db) {
    const PointContext pt = make_point(cfg, snr);
    const auto calibrations = calibrate_targets(cfg, pt, tb.table());
    const auto recs = simulate(pt, cfg.n_blocks, derive_seed(cfg.seed, kDataStream), cfg.threads);
    const auto streams = to_streams(recs);
    const std::uint64_t reference_samples = 2 * cfg.n_blocks;
    for (std::size_t t = 0; t < cfg.initial_error_rates.size(); ++t) {
      const double target = cfg.initial_error_rates[t];
      if (!calibrations[t]) {
        tb.add(snr, target, "all", "calibration_failed", 1.0, 0);
        continue;
      }
      const GuardBandQuantizer q = calibrations[t]->quantizer;
      const ConsensusOutcome cons = exchange_indices(streams, q, false);
      tb.add(snr, target, "all", "guard_band", q.q_plus, calib_blocks(cfg));
      tb.add(snr, target, "all", "calibrated_mismatch", calibrations[t]->mismatch,
             calibrations[t]->consensus_samples);
      tb.add(snr, target, "all", "csr_gain", pt.gain, 0);

      const std::size_t fixed_bits = cons.r_h12.size();
      const std::size_t opp_bits = cons.exclusive_h12.size() + cons.exclusive_h13.size() + cons.v.size();
      tb.add(snr, target, "fixed_h12", "key_rate", double(fixed_bits) / reference_samples, reference_samples);
      tb.add(snr, target, "opportunistic", "key_rate", double(opp_bits) / reference_samples, reference_samples);
      tb.add(snr, target, "opportunistic", "bits_per_block", double(opp_bits) / cfg.n_blocks, cfg.n_blocks);
      tb.add(snr, target, "opportunistic", "v_samples", double(cons.v.size()), reference_samples);
      tb.add(snr, target, "opportunistic", "exclusive_h13_samples", double(cons.exclusive_h13.size()),
             reference_samples);
      const double gain = fixed_bits ? double(opp_bits) / fixed_bits - 1.0 : 0.0;
      tb.add(snr, target, "opportunistic", "relative_improvement", gain, fixed_bits);

      const auto fixed_key = assemble_key(cons, SelectionMode::FixedH12, pt, q, recs);
      const auto fixed_mm = count_mismatch(fixed_key, recs, q);
      tb.add(snr, target, "fixed_h12", "mismatch_rate", fixed_mm.rate(), fixed_mm.positions);
      const SelectionMode opp_mode =
          cfg.selection_mode == SelectionMode::FixedH12 ? SelectionMode::Likelihood : cfg.selection_mode;
      const auto opp_key = assemble_key(cons, opp_mode, pt, q, recs);
      const auto opp_mm = count_mismatch(opp_key, recs, q);
      tb.add(snr, target, "opportunistic", "mismatch_rate", opp_mm.rate(), opp_mm.positions);
    }
  }
  return std::move(tb.table());
}

ResultTable run_selection_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  TableBuilder tb(cfg, "selection");
  for (double snr : cfg.snr_db) {
    const PointContext pt = make_point(cfg, snr);
    const auto calibrations = calibrate_targets(cfg, pt, tb.table());
    const auto recs = simulate(pt, cfg.n_blocks, derive_seed(cfg.seed, kDataStream), cfg.threads);
    const auto streams = to_streams(recs);
    for (std::size_t t = 0; t < cfg.initial_error_rates.size(); ++t) {
      const double target = cfg.initial_error_rates[t];
      if (!calibrations[t]) {
        tb.add(snr, target, "all", "calibration_failed", 1.0, 0);
        continue;
      }
      const GuardBandQuantizer q = calibrations[t]->quantizer;
      const ConsensusOutcome cons = exchange_indices(streams, q, false);
      tb.add(snr, target, "all", "guard_band", q.q_plus, calib_blocks(cfg));
      if (cons.v.empty()) {
        tb.add(snr, target, "all", "insufficient_samples", 1.0, 0);
        continue;
      }
      auto evaluate = [&](const char* label, const std::map<std::size_t, ChannelId>& decisions) {
        std::vector<KeyPosition> key;
        key.reserve(decisions.size());
        std::size_t chose_h13 = 0;
        for (const auto& [i, ch] : decisions) {
          key.push_back({i, ch});
          chose_h13 += ch == ChannelId::H13;
        }
        const auto mm = count_mismatch(key, recs, q);
        tb.add(snr, target, label, "mismatch_rate", mm.rate(), mm.positions);
        tb.add(snr, target, label, "mismatches", double(mm.any), mm.positions);
        tb.add(snr, target, label, "h13_fraction", double(chose_h13) / key.size(), key.size());
      };
      evaluate("likelihood", select_on_v(cons.v, SelectionMode::Likelihood, pt, q, recs));
      evaluate("strength", select_on_v(cons.v, SelectionMode::Strength, pt, q, recs));
      std::map<std::size_t, ChannelId> fixed12, fixed13;
      for (std::size_t i : cons.v) {
        fixed12[i] = ChannelId::H12;
        fixed13[i] = ChannelId::H13;
      }
      evaluate("fixed_h12", fixed12);
      evaluate("fixed_h13", fixed13);
    }
  }
  return std::move(tb.table());
}

namespace {

struct KeyLlrs {
  BitVector x, b2, b3;
  std::vector<double> l2, l3;
  std::vector<std::uint8_t> node2_reciprocal;  // 1 when node-2 holds the key bit's CSR by reciprocity
};

KeyLlrs key_llrs(const std::vector<KeyPosition>& key, const std::vector<BlockRecord>& recs,
                 const PointContext& pt, const GuardBandQuantizer& q, const JointPmfTable& joint,
                 const Pmf& prior, unsigned threads) {
  const std::size_t len = key.size();
  KeyLlrs k{BitVector(len), BitVector(len), BitVector(len), std::vector<double>(len),
            std::vector<double>(len), std::vector<std::uint8_t>(len)};
  detail::parallel_chunks(len, threads, 4096, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const KeyPosition& pos = key[i];
      const BlockRecord& rec = recs[pos.block()];
      const Part p = pos.part();
      k.x[i] = bit_at(rec, 1, pos, q);
      k.b2[i] = bit_at(rec, 2, pos, q);
      k.b3[i] = bit_at(rec, 3, pos, q);
      if (pos.channel == ChannelId::H12) {
        k.node2_reciprocal[i] = 1;
        k.l2[i] = llr_reciprocal(rec.value(2, ChannelId::H12, p), joint, pt.c, q);
        k.l3[i] = llr_decoding(rec.value(3, ChannelId::H12, p), rec.value(3, ChannelId::H13, p),
                               rec.est3_13, pt.sigma2, prior, pt.c, q);
      } else {
        k.l3[i] = llr_reciprocal(rec.value(3, ChannelId::H13, p), joint, pt.c, q);
        k.l2[i] = llr_decoding(rec.value(2, ChannelId::H13, p), rec.value(2, ChannelId::H12, p),
                               rec.est2_12, pt.sigma2, prior, pt.c, q);
      }
    }
  });
  return k;
}

}  // namespace

LlrSamples collect_llr_samples(const ExperimentConfig& cfg, double snr_db, double target) {
  cfg.validate();
  auto one = cfg;
  one.snr_db = {snr_db};
  one.initial_error_rates = {target};
  ResultTable scratch;
  const PointContext pt = make_point(one, snr_db);
  const auto cal = calibrate_targets(one, pt, scratch);
  if (!cal[0]) throw Error(ErrorCode::CalibrationFailure, "guard band calibration failed");
  const GuardBandQuantizer q = cal[0]->quantizer;
  const auto recs = simulate(pt, one.n_blocks, derive_seed(one.seed, kDataStream), one.threads);
  const ConsensusOutcome cons = exchange_indices(to_streams(recs), q, false);
  const auto key = assemble_key(cons, one.selection_mode, pt, q, recs);
  const KeyLlrs k = key_llrs(key, recs, pt, q, build_joint_pmf(pt.gamma, pt.c, pt.gain),
                             csr_prior(pt.gamma, pt.c, pt.gain, q), one.threads);
  LlrSamples out;
  out.guard_band = q.q_plus;
  for (std::size_t i = 0; i < key.size(); ++i) {
    const bool r2 = k.node2_reciprocal[i];
    out.reciprocal.push_back({k.x[i], r2 ? k.l2[i] : k.l3[i]});
    out.decoding.push_back({k.x[i], r2 ? k.l3[i] : k.l2[i]});
  }
  return out;
}

ResultTable run_reconciliation_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ParityCheckMatrix h = cfg.ldpc_matrix.empty() ? default_code_12_9() : load_alist(cfg.ldpc_matrix);
  TableBuilder tb(cfg, "reconcile");
  const std::string code = "ldpc_" + std::to_string(h.n()) + "_" + std::to_string(h.k());
  for (double snr : cfg.snr_db) {
    const PointContext pt = make_point(cfg, snr);
    const auto calibrations = calibrate_targets(cfg, pt, tb.table());
    const auto recs = simulate(pt, cfg.n_blocks, derive_seed(cfg.seed, kDataStream), cfg.threads);
    const auto streams = to_streams(recs);
    const JointPmfTable joint = build_joint_pmf(pt.gamma, pt.c, pt.gain);
    for (std::size_t t = 0; t < cfg.initial_error_rates.size(); ++t) {
      const double target = cfg.initial_error_rates[t];
      if (!calibrations[t]) {
        tb.add(snr, target, code, "calibration_failed", 1.0, 0);
        continue;
      }
      const GuardBandQuantizer q = calibrations[t]->quantizer;
      const ConsensusOutcome cons = exchange_indices(streams, q, false);
      const auto key = assemble_key(cons, cfg.selection_mode, pt, q, recs);
      const Pmf prior = csr_prior(pt.gamma, pt.c, pt.gain, q);

      const KeyLlrs k = key_llrs(key, recs, pt, q, joint, prior, cfg.threads);
      const std::size_t len = key.size();
      const BitVector& x = k.x;
      const BitVector& b2 = k.b2;
      const BitVector& b3 = k.b3;
      const auto& l2 = k.l2;
      const auto& l3 = k.l3;
      const ReconcileStats s2 = reconcile_block(x, b2, l2, h, cfg.max_iter);
      const ReconcileStats s3 = reconcile_block(x, b3, l3, h, cfg.max_iter);
      std::size_t pre_any = 0;
      std::size_t post_any = 0;
      for (std::size_t i = 0; i < len; ++i) {
        pre_any += (b2[i] != x[i] || b3[i] != x[i]);
        post_any += (s2.corrected[i] != x[i] || s3.corrected[i] != x[i]);
      }
      const std::string mode = std::string(to_string(cfg.selection_mode)) + "/" + code;
      tb.add(snr, target, mode, "guard_band", q.q_plus, calib_blocks(cfg));
      tb.add(snr, target, mode, "key_bits", double(len), len);
      tb.add(snr, target, mode, "pre_mismatch", len ? double(pre_any) / len : 0.0, len);
      tb.add(snr, target, mode, "post_mismatch", len ? double(post_any) / len : 0.0, len);
      tb.add(snr, target, mode, "pre_mismatch_node2", s2.pre_rate(), len);
      tb.add(snr, target, mode, "post_mismatch_node2", s2.post_rate(), len);
      tb.add(snr, target, mode, "pre_mismatch_node3", s3.pre_rate(), len);
      tb.add(snr, target, mode, "post_mismatch_node3", s3.post_rate(), len);
      const std::size_t frames = s2.frames + s3.frames;
      tb.add(snr, target, mode, "converged_fraction",
             frames ? double(s2.converged_frames + s3.converged_frames) / frames : 1.0, frames);
      tb.add(snr, target, mode, "disclosed_bits", double(s2.disclosed_bits), s2.frames);
    }
  }
  return std::move(tb.table());
}

ResultTable run_leakage_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  TableBuilder tb(cfg, "leakage");
  for (double snr : cfg.snr_db) {
    const PointContext pt = make_point(cfg, snr);
    const Constellation& c = pt.c;
    const QamPmf uniform = product_pmf(uniform_pmf(c), uniform_pmf(c));
    const RingLeakage exact_uniform = exact_mi_ring(uniform, uniform, c);
    tb.add(snr, std::nullopt, "exact_uniform", "mi_single_12", exact_uniform.mi_single_12, 0);
    tb.add(snr, std::nullopt, "exact_uniform", "mi_single_13", exact_uniform.mi_single_13, 0);
    tb.add(snr, std::nullopt, "exact_uniform", "mi_joint", exact_uniform.mi_joint, 0);

    const Pmf per_dim = induce_pmf(0.0, pt.gain * pt.gain * (1.0 + pt.gamma) / 2.0, c);
    const QamPmf csr = product_pmf(per_dim, per_dim);
    const RingLeakage exact_model = exact_mi_ring(csr, csr, c);
    tb.add(snr, std::nullopt, "exact_protocol", "mi_single_12", exact_model.mi_single_12, 0);
    tb.add(snr, std::nullopt, "exact_protocol", "mi_single_13", exact_model.mi_single_13, 0);
    tb.add(snr, std::nullopt, "exact_protocol", "mi_joint", exact_model.mi_joint, 0);
    tb.add(snr, std::nullopt, "exact_protocol", "entropy_h13", exact_model.h13, 0);
    tb.add(snr, std::nullopt, "exact_protocol", "csr_gain", pt.gain, 0);

    const auto recs = simulate(pt, cfg.n_blocks, derive_seed(cfg.seed, kDataStream), cfg.threads);
    std::vector<int> x12, x13, s;
    for (const auto& r : recs) {
      if (!r.valid) continue;
      const RingElement a = phi(r.node1.csr12, c);
      const RingElement b = phi(r.node1.csr13, c);
      const RingElement sum = ring_add(a, b);
      x12.push_back(a.re * c.side() + a.im);
      x13.push_back(b.re * c.side() + b.im);
      s.push_back(sum.re * c.side() + sum.im);
    }
    try {
      const std::uint64_t n = x12.size();
      tb.add(snr, std::nullopt, "empirical", "mi_single_12", empirical_mi(x12, s, c.size(), c.size()), n);
      tb.add(snr, std::nullopt, "empirical", "mi_single_13", empirical_mi(x13, s, c.size(), c.size()), n);
      tb.add(snr, std::nullopt, "empirical", "bias_floor",
             shuffled_mi_floor(x12, s, c.size(), c.size(), 8, derive_seed(cfg.seed, kShuffleStream)), n);
      tb.add(snr, std::nullopt, "empirical_mm", "mi_single_12", empirical_mi(x12, s, c.size(), c.size(), true), n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientData) throw;
      tb.add(snr, std::nullopt, "empirical", "insufficient_samples", 1.0, x12.size());
    }
  }
  return std::move(tb.table());
}

ResultTable run_calibration_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  TableBuilder tb(cfg, "calibrate");
  for (double snr : cfg.snr_db) {
    const PointContext pt = make_point(cfg, snr);
    const auto calibrations = calibrate_targets(cfg, pt, tb.table());
    // Fresh data run to validate each band.
    const auto recs = simulate(pt, cfg.n_blocks, derive_seed(cfg.seed, kDataStream), cfg.threads);
    const MismatchProfile validation = profile_of(recs, pt.c);
    for (std::size_t t = 0; t < cfg.initial_error_rates.size(); ++t) {
      const double target = cfg.initial_error_rates[t];
      if (!calibrations[t]) {
        tb.add(snr, target, "symmetric", "calibration_failed", 1.0, 0);
        continue;
      }
      const auto& cal = *calibrations[t];
      const auto point = validation.evaluate(cal.quantizer.q_plus);
      tb.add(snr, target, "symmetric", "guard_band", cal.quantizer.q_plus, calib_blocks(cfg));
      tb.add(snr, target, "symmetric", "calibrated_mismatch", cal.mismatch, cal.consensus_samples);
      tb.add(snr, target, "symmetric", "consensus_fraction",
             cal.total_samples ? double(cal.consensus_samples) / cal.total_samples : 0.0, cal.total_samples);
      tb.add(snr, target, "symmetric", "validation_mismatch", point.worst_rate(), point.in_consensus);
      tb.add(snr, target, "symmetric", "csr_gain", pt.gain, 0);
    }
  }
  return std::move(tb.table());
}

ResultTable run_experiment(Experiment e, const ExperimentConfig& cfg) {
  switch (e) {
    case Experiment::KeyRate: return run_keyrate_experiment(cfg);
    case Experiment::Selection: return run_selection_experiment(cfg);
    case Experiment::Reconcile: return run_reconciliation_experiment(cfg);
    case Experiment::Leakage: return run_leakage_experiment(cfg);
    case Experiment::Calibrate: return run_calibration_experiment(cfg);
  }
  throw Error(ErrorCode::Config, "unknown experiment");
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Parse, "invalid number '" + std::string(s) + "'");
  }
  return v;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string to_csv(const ResultTable& t, bool reproducible) {
  std::ostringstream out;
  if (!reproducible) out << "# generated " << timestamp() << '\n';
  out << kCsvHeader << '\n';
  for (const auto& r : t.rows) {
    out << r.experiment << ',' << r.m << ',' << format_double(r.snr_db) << ','
        << (r.target_ier ? format_double(*r.target_ier) : "") << ',' << r.mode << ',' << r.metric
        << ',' << format_double(r.value) << ',' << r.n << ',' << r.seed << '\n';
  }
  return out.str();
}

std::string to_json(const ResultTable& t, bool reproducible) {
  nlohmann::ordered_json j;
  if (!reproducible) j["generated"] = timestamp();
  j["columns"] = {"experiment", "m", "snr_db", "target_ier", "mode", "metric", "value", "n", "seed"};
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json row;
    row["experiment"] = r.experiment;
    row["m"] = r.m;
    row["snr_db"] = r.snr_db;
    row["target_ier"] = r.target_ier ? nlohmann::ordered_json(*r.target_ier) : nlohmann::ordered_json(nullptr);
    row["mode"] = r.mode;
    row["metric"] = r.metric;
    row["value"] = std::isfinite(r.value) ? nlohmann::ordered_json(r.value) : nlohmann::ordered_json(nullptr);
    row["n"] = r.n;
    row["seed"] = r.seed;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

ResultTable parse_csv(std::string_view text) {
  ResultTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != kCsvHeader) throw Error(ErrorCode::Parse, "unexpected CSV header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 9) throw Error(ErrorCode::Parse, "CSV line " + std::to_string(line_no) + ": expected 9 fields");
    ResultRow r;
    r.experiment = f[0];
    r.m = static_cast<int>(parse_double(f[1]));
    r.snr_db = parse_double(f[2]);
    if (!f[3].empty()) r.target_ier = parse_double(f[3]);
    r.mode = f[4];
    r.metric = f[5];
    r.value = parse_double(f[6]);
    r.n = static_cast<std::uint64_t>(std::stoull(f[7]));
    r.seed = static_cast<std::uint64_t>(std::stoull(f[8]));
    t.rows.push_back(std::move(r));
  }
  if (!header) throw Error(ErrorCode::Parse, "missing CSV header");
  return t;
}

ResultTable parse_json(std::string_view text) {
  ResultTable t;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& row : j.at("rows")) {
      ResultRow r;
      r.experiment = row.at("experiment").get<std::string>();
      r.m = row.at("m").get<int>();
      r.snr_db = row.at("snr_db").get<double>();
      if (!row.at("target_ier").is_null()) r.target_ier = row.at("target_ier").get<double>();
      r.mode = row.at("mode").get<std::string>();
      r.metric = row.at("metric").get<std::string>();
      r.value = row.at("value").is_null() ? std::nan("") : row.at("value").get<double>();
      r.n = row.at("n").get<std::uint64_t>();
      r.seed = row.at("seed").get<std::uint64_t>();
      t.rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("invalid result JSON: ") + e.what());
  }
  return t;
}

void emit(const ResultTable& t, OutputFormat format, const std::string& path, bool reproducible) {
  const std::string body = format == OutputFormat::Csv ? to_csv(t, reproducible) : to_json(t, reproducible);
  if (path.empty() || path == "-") {
    std::cout << body;
    std::cout.flush();
    if (!std::cout) throw Error(ErrorCode::Io, "cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open output file " + path);
  out << body;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "failed writing output file " + path);
}

}  // namespace ogsk
