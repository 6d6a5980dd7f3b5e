/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// Command-line front end. Talks to the library only through ogsk.h.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ogsk/ogsk.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCalibration = 3;

struct ConfigDeleter {
  void operator()(ogsk_config* c) const { ogsk_config_destroy(c); }
};
struct ResultDeleter {
  void operator()(ogsk_result* r) const { ogsk_result_destroy(r); }
};

int report(ogsk_status s) {
  std::fprintf(stderr, "ogsk: %s: %s\n", ogsk_status_string(s), ogsk_last_error());
  if (s == OGSK_ERR_CONFIG || s == OGSK_ERR_INVALID_ARGUMENT || s == OGSK_ERR_PARSE) return kExitConfig;
  if (s == OGSK_ERR_CALIBRATION) return kExitCalibration;
  return kExitFailure;
}

// Option values as strings, keyed by the library's option names. Only flags
// given on the command line are forwarded, so they override the config file.
struct Flags {
  std::map<std::string, std::string> values;
  bool reproducible = false;
  std::string config;
};

void add_flags(CLI::App* sub, Flags& f) {
  const std::vector<std::pair<std::string, std::string>> opts = {
      {"m", "Bits per QAM symbol (even)"},
      {"snr", "Comma-separated SNR points in dB"},
      {"ier", "Comma-separated target initial error rates"},
      {"blocks", "Coherence blocks per SNR point"},
      {"calib-blocks", "Blocks used for guard-band calibration (default: --blocks)"},
      {"seed", "Master seed"},
      {"mode", "Selection rule: likelihood, strength or fixed_h12"},
      {"ldpc-matrix", "Parity-check matrix in alist format"},
      {"out", "Output path ('-' for stdout)"},
      {"format", "csv or json"},
      {"gamma", "Estimation error variance, or 'tied' for gamma = sigma^2"},
      {"csr-gain", "Quantizer gain, or 'auto' for the equiprobable gain"},
      {"max-iter", "Sum-product iterations per frame"},
      {"threads", "Worker threads (0 = hardware concurrency)"},
      {"map-prior", "Broadcast decoding prior: uniform or true"},
  };
  for (const auto& [name, help] : opts) {
    sub->add_option_function<std::string>(
        "--" + name, [&f, name = name](const std::string& v) { f.values[name] = v; }, help);
  }
  sub->add_flag("--reproducible", f.reproducible, "Omit the timestamp line for byte-identical output");
  sub->add_option("--config", f.config, "key = value config file; flags override it");
}

int run(const std::string& experiment, const Flags& f) {
  ogsk_config* raw = nullptr;
  if (ogsk_status s = ogsk_config_create(&raw); s != OGSK_OK) return report(s);
  std::unique_ptr<ogsk_config, ConfigDeleter> cfg(raw);

  if (!f.config.empty()) {
    if (ogsk_status s = ogsk_config_load_file(cfg.get(), f.config.c_str()); s != OGSK_OK) return report(s);
  }
  for (const auto& [k, v] : f.values) {
    if (ogsk_status s = ogsk_config_set(cfg.get(), k.c_str(), v.c_str()); s != OGSK_OK) return report(s);
  }
  if (f.reproducible) ogsk_config_set(cfg.get(), "reproducible", "true");
  if (ogsk_status s = ogsk_config_validate(cfg.get()); s != OGSK_OK) return report(s);

  ogsk_result* res_raw = nullptr;
  if (ogsk_status s = ogsk_run(cfg.get(), experiment.c_str(), &res_raw); s != OGSK_OK) return report(s);
  std::unique_ptr<ogsk_result, ResultDeleter> res(res_raw);

  const char* out = "";
  ogsk_format format = OGSK_FORMAT_CSV;
  int reproducible = 0;
  ogsk_config_output(cfg.get(), &out, &format, &reproducible);
  if (ogsk_status s = ogsk_result_write(res.get(), format, out, reproducible); s != OGSK_OK) {
    return report(s);
  }

  size_t points = 0;
  size_t failures = 0;
  ogsk_result_calibration(res.get(), &points, &failures);
  if (points > 0 && failures == points) {
    std::fprintf(stderr, "ogsk: guard-band calibration failed at every point\n");
    return kExitCalibration;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-node group secret-key generation simulator"};
  app.set_version_flag("--version", std::string(ogsk_version()));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"keyrate", "Key rate of fixed and opportunistic CSR use"},
      {"selection", "Mismatch of selection rules on doubly-consensual samples"},
      {"reconcile", "Pre- and post-reconciliation key mismatch"},
      {"leakage", "Mutual information leaked by the broadcast"},
      {"calibrate", "Guard-band calibration and validation"},
  };
  std::vector<Flags> flags(experiments.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    CLI::App* sub = app.add_subcommand(experiments[i].first, experiments[i].second);
    add_flags(sub, flags[i]);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) return run(experiments[i].first, flags[i]);
  }
  return kExitConfig;
}
