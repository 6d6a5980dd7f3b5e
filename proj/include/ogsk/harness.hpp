/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

// Experiment sweeps over SNR and target initial error rate, and their tabular
// output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ogsk/consensus.hpp"
#include "ogsk/recon.hpp"

namespace ogsk {

enum class SelectionMode { Likelihood, Strength, FixedH12 };
enum class OutputFormat { Csv, Json };
enum class Experiment { KeyRate, Selection, Reconcile, Leakage, Calibrate };

const char* to_string(SelectionMode mode) noexcept;
const char* to_string(Experiment e) noexcept;
SelectionMode parse_selection_mode(std::string_view s);
OutputFormat parse_output_format(std::string_view s);
Experiment parse_experiment(std::string_view s);

struct ExperimentConfig {
  int m = 4;
  std::vector<double> snr_db{10, 15, 20, 25, 30};
  /// Estimation error variance; empty ties it to the noise, gamma = sigma^2.
  std::optional<double> gamma;
  std::vector<double> initial_error_rates{0.1};
  std::size_t n_blocks = 200000;
  /// Blocks used to calibrate guard bands; 0 means n_blocks.
  std::size_t calib_blocks = 0;
  std::uint64_t seed = 1;
  SelectionMode selection_mode = SelectionMode::Likelihood;
  /// alist file; empty selects the bundled (12, 9) code.
  std::string ldpc_matrix;
  int max_iter = 50;
  /// Quantizer gain on channel estimates; empty picks the equiprobable
  /// (entropy-maximizing) gain.
  std::optional<double> csr_gain = 1.0;
  /// MAP-decode the broadcast with its true (ring-convolved) prior instead of
  /// a uniform one.
  bool true_prior_map = false;
  std::string out;
  OutputFormat format = OutputFormat::Csv;
  bool reproducible = false;
  unsigned threads = 0;

  /// Throws Config on violated invariants.
  void validate() const;
};

/// Sets one option by its long name (the CLI flag without dashes). Throws Config.
void apply_option(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// key=value lines; '#' and ';' start comments, [section] headers are ignored.
void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

struct ResultRow {
  std::string experiment;
  int m = 0;
  double snr_db = 0.0;
  std::optional<double> target_ier;
  std::string mode;
  std::string metric;
  double value = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  /// Calibrated parameter points, and how many of them failed calibration.
  std::size_t calibration_points = 0;
  std::size_t calibration_failures = 0;

  const ResultRow* find(std::string_view metric, std::string_view mode, double snr_db,
                        std::optional<double> target = std::nullopt) const;
};

ResultTable run_keyrate_experiment(const ExperimentConfig& cfg);
ResultTable run_selection_experiment(const ExperimentConfig& cfg);
ResultTable run_reconciliation_experiment(const ExperimentConfig& cfg);
ResultTable run_leakage_experiment(const ExperimentConfig& cfg);
ResultTable run_calibration_experiment(const ExperimentConfig& cfg);
ResultTable run_experiment(Experiment e, const ExperimentConfig& cfg);

struct LlrSample {
  std::uint8_t bit = 0;  // node-1's key bit
  double llr = 0.0;
};

struct LlrSamples {
  std::vector<LlrSample> reciprocal;  // node holding the bit's CSR by reciprocity
  std::vector<LlrSample> decoding;    // node recovering it from the broadcast
  double guard_band = 0.0;
};

/// Key-bit LLRs of one (SNR, target) point, computed as in the reconciliation
/// experiment. Throws CalibrationFailure when no guard band reaches the target.
LlrSamples collect_llr_samples(const ExperimentConfig& cfg, double snr_db, double target);

inline constexpr const char* kCsvHeader = "experiment,m,snr_db,target_ier,mode,metric,value,n,seed";

/// Without `reproducible` a leading "# generated ..." line (CSV) or a
/// "generated" field (JSON) carries a timestamp.
std::string to_csv(const ResultTable& t, bool reproducible);
std::string to_json(const ResultTable& t, bool reproducible);
ResultTable parse_csv(std::string_view text);
ResultTable parse_json(std::string_view text);

/// Writes to `path`, or to stdout when it is empty or "-". IO errors name the path.
void emit(const ResultTable& t, OutputFormat format, const std::string& path, bool reproducible);

}  // namespace ogsk
