/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "ogsk/ogsk.h"

#include <cstring>
#include <exception>
#include <new>
#include <span>
#include <string>

#include "ogsk/algebra.hpp"
#include "ogsk/harness.hpp"
#include "ogsk/recon.hpp"

struct ogsk_config {
  ogsk::ExperimentConfig cfg;
};

struct ogsk_result {
  ogsk::ResultTable table;
};

struct ogsk_constellation {
  ogsk::Constellation c;
};

struct ogsk_ldpc {
  ogsk::ParityCheckMatrix h;
};

namespace {

thread_local std::string last_error;

ogsk_status status_of(ogsk::ErrorCode code) {
  using ogsk::ErrorCode;
  switch (code) {
    case ErrorCode::Domain: return OGSK_ERR_DOMAIN;
    case ErrorCode::DecodeFailure: return OGSK_ERR_DECODE;
    case ErrorCode::CalibrationFailure: return OGSK_ERR_CALIBRATION;
    case ErrorCode::ContractViolation: return OGSK_ERR_CONTRACT;
    case ErrorCode::UndefinedLlr: return OGSK_ERR_UNDEFINED_LLR;
    case ErrorCode::Parse: return OGSK_ERR_PARSE;
    case ErrorCode::InsufficientData: return OGSK_ERR_INSUFFICIENT_DATA;
    case ErrorCode::Config: return OGSK_ERR_CONFIG;
    case ErrorCode::Io: return OGSK_ERR_IO;
  }
  return OGSK_ERR_INTERNAL;
}

ogsk_status fail(ogsk_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F>
ogsk_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return OGSK_OK;
  } catch (const ogsk::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(OGSK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OGSK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OGSK_ERR_INTERNAL, "unknown error");
  }
}

#define OGSK_REQUIRE(cond)                                               \
  do {                                                                   \
    if (!(cond)) return fail(OGSK_ERR_INVALID_ARGUMENT, "null argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* ogsk_version(void) { return "0.1.0"; }

const char* ogsk_last_error(void) { return last_error.c_str(); }

const char* ogsk_status_string(ogsk_status status) {
  switch (status) {
    case OGSK_OK: return "ok";
    case OGSK_ERR_INTERNAL: return "internal error";
    case OGSK_ERR_CONFIG: return "configuration error";
    case OGSK_ERR_CALIBRATION: return "calibration failure";
    case OGSK_ERR_DOMAIN: return "domain error";
    case OGSK_ERR_DECODE: return "decode failure";
    case OGSK_ERR_CONTRACT: return "contract violation";
    case OGSK_ERR_UNDEFINED_LLR: return "undefined LLR";
    case OGSK_ERR_PARSE: return "parse error";
    case OGSK_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case OGSK_ERR_IO: return "I/O error";
    case OGSK_ERR_INVALID_ARGUMENT: return "invalid argument";
  }
  return "unknown status";
}

ogsk_status ogsk_config_create(ogsk_config** out) {
  OGSK_REQUIRE(out);
  return guarded([&] { *out = new ogsk_config{}; });
}

void ogsk_config_destroy(ogsk_config* cfg) { delete cfg; }

ogsk_status ogsk_config_set(ogsk_config* cfg, const char* key, const char* value) {
  OGSK_REQUIRE(cfg && key && value);
  return guarded([&] { ogsk::apply_option(cfg->cfg, key, value); });
}

ogsk_status ogsk_config_load_file(ogsk_config* cfg, const char* path) {
  OGSK_REQUIRE(cfg && path);
  return guarded([&] { ogsk::load_config_file(cfg->cfg, path); });
}

ogsk_status ogsk_config_validate(const ogsk_config* cfg) {
  OGSK_REQUIRE(cfg);
  return guarded([&] { cfg->cfg.validate(); });
}

ogsk_status ogsk_config_output(const ogsk_config* cfg, const char** path, ogsk_format* format,
                               int* reproducible) {
  OGSK_REQUIRE(cfg && path && format && reproducible);
  *path = cfg->cfg.out.c_str();
  *format = cfg->cfg.format == ogsk::OutputFormat::Json ? OGSK_FORMAT_JSON : OGSK_FORMAT_CSV;
  *reproducible = cfg->cfg.reproducible ? 1 : 0;
  return OGSK_OK;
}

ogsk_status ogsk_run(const ogsk_config* cfg, const char* experiment, ogsk_result** out) {
  OGSK_REQUIRE(cfg && experiment && out);
  *out = nullptr;
  return guarded([&] {
    const auto e = ogsk::parse_experiment(experiment);
    *out = new ogsk_result{ogsk::run_experiment(e, cfg->cfg)};
  });
}

void ogsk_result_destroy(ogsk_result* res) { delete res; }

size_t ogsk_result_row_count(const ogsk_result* res) { return res ? res->table.rows.size() : 0; }

ogsk_status ogsk_result_row(const ogsk_result* res, size_t index, ogsk_row* out) {
  OGSK_REQUIRE(res && out);
  if (index >= res->table.rows.size()) return fail(OGSK_ERR_DOMAIN, "row index out of range");
  const auto& r = res->table.rows[index];
  out->experiment = r.experiment.c_str();
  out->m = r.m;
  out->snr_db = r.snr_db;
  out->has_target_ier = r.target_ier.has_value();
  out->target_ier = r.target_ier.value_or(0.0);
  out->mode = r.mode.c_str();
  out->metric = r.metric.c_str();
  out->value = r.value;
  out->n = r.n;
  out->seed = r.seed;
  return OGSK_OK;
}

ogsk_status ogsk_result_calibration(const ogsk_result* res, size_t* points, size_t* failures) {
  OGSK_REQUIRE(res && points && failures);
  *points = res->table.calibration_points;
  *failures = res->table.calibration_failures;
  return OGSK_OK;
}

ogsk_status ogsk_result_write(const ogsk_result* res, ogsk_format format, const char* path, int reproducible) {
  OGSK_REQUIRE(res);
  return guarded([&] {
    const auto f = format == OGSK_FORMAT_JSON ? ogsk::OutputFormat::Json : ogsk::OutputFormat::Csv;
    ogsk::emit(res->table, f, path ? path : "", reproducible != 0);
  });
}

ogsk_status ogsk_result_render(const ogsk_result* res, ogsk_format format, int reproducible, char* buf,
                               size_t cap, size_t* needed) {
  OGSK_REQUIRE(res && needed);
  return guarded([&] {
    const std::string s = format == OGSK_FORMAT_JSON ? ogsk::to_json(res->table, reproducible != 0)
                                                     : ogsk::to_csv(res->table, reproducible != 0);
    *needed = s.size() + 1;
    if (buf && cap >= s.size() + 1) std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

ogsk_status ogsk_constellation_create(int m, ogsk_constellation** out) {
  OGSK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new ogsk_constellation{ogsk::Constellation(m)}; });
}

void ogsk_constellation_destroy(ogsk_constellation* c) { delete c; }

size_t ogsk_constellation_size(const ogsk_constellation* c) { return c ? c->c.size() : 0; }

double ogsk_constellation_e_avg(const ogsk_constellation* c) { return c ? c->c.e_avg() : 0.0; }

ogsk_status ogsk_quantize(const ogsk_constellation* c, double re, double im, double* out_re, double* out_im) {
  OGSK_REQUIRE(c && out_re && out_im);
  return guarded([&] {
    const ogsk::Complex q = ogsk::quantize({re, im}, c->c);
    *out_re = q.real();
    *out_im = q.imag();
  });
}

ogsk_status ogsk_ldpc_default(ogsk_ldpc** out) {
  OGSK_REQUIRE(out);
  return guarded([&] { *out = new ogsk_ldpc{ogsk::default_code_12_9()}; });
}

ogsk_status ogsk_ldpc_load_alist(const char* path, ogsk_ldpc** out) {
  OGSK_REQUIRE(path && out);
  *out = nullptr;
  return guarded([&] { *out = new ogsk_ldpc{ogsk::load_alist(path)}; });
}

void ogsk_ldpc_destroy(ogsk_ldpc* h) { delete h; }

size_t ogsk_ldpc_n(const ogsk_ldpc* h) { return h ? h->h.n() : 0; }

size_t ogsk_ldpc_k(const ogsk_ldpc* h) { return h ? h->h.k() : 0; }

ogsk_status ogsk_ldpc_syndrome(const ogsk_ldpc* h, const uint8_t* bits, size_t n, uint8_t* syndrome_out) {
  OGSK_REQUIRE(h && bits && syndrome_out);
  return guarded([&] {
    const auto s = ogsk::syndrome(std::span<const std::uint8_t>(bits, n), h->h);
    std::copy(s.begin(), s.end(), syndrome_out);
  });
}

ogsk_status ogsk_ldpc_decode(const ogsk_ldpc* h, const double* llrs, size_t n, const uint8_t* syndrome,
                             int max_iter, uint8_t* bits_out, int* converged) {
  OGSK_REQUIRE(h && llrs && syndrome && bits_out);
  return guarded([&] {
    const auto r = ogsk::decode_syndrome(std::span<const double>(llrs, n),
                                         std::span<const std::uint8_t>(syndrome, h->h.checks()), h->h, max_iter);
    std::copy(r.bits.begin(), r.bits.end(), bits_out);
    if (converged) *converged = r.converged ? 1 : 0;
  });
}

}  // extern "C"
