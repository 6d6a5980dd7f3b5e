/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#ifndef OGSK_OGSK_H
#define OGSK_OGSK_H

/* C interface to the ogsk simulation library. Every call returns an
 * ogsk_status; on failure ogsk_last_error() describes it. Strings returned by
 * the library stay valid for the lifetime of the owning handle. */

#include <stddef.h>
#include <stdint.h>

#if defined(OGSK_BUILDING_LIBRARY)
#define OGSK_API __attribute__((visibility("default")))
#else
#define OGSK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ogsk_status {
  OGSK_OK = 0,
  OGSK_ERR_INTERNAL = 1,
  OGSK_ERR_CONFIG = 2,
  OGSK_ERR_CALIBRATION = 3,
  OGSK_ERR_DOMAIN = 4,
  OGSK_ERR_DECODE = 5,
  OGSK_ERR_CONTRACT = 6,
  OGSK_ERR_UNDEFINED_LLR = 7,
  OGSK_ERR_PARSE = 8,
  OGSK_ERR_INSUFFICIENT_DATA = 9,
  OGSK_ERR_IO = 10,
  OGSK_ERR_INVALID_ARGUMENT = 11
} ogsk_status;

typedef enum ogsk_format { OGSK_FORMAT_CSV = 0, OGSK_FORMAT_JSON = 1 } ogsk_format;

typedef struct ogsk_config ogsk_config;
typedef struct ogsk_result ogsk_result;
typedef struct ogsk_constellation ogsk_constellation;
typedef struct ogsk_ldpc ogsk_ldpc;

typedef struct ogsk_row {
  const char* experiment;
  int m;
  double snr_db;
  int has_target_ier;
  double target_ier;
  const char* mode;
  const char* metric;
  double value;
  uint64_t n;
  uint64_t seed;
} ogsk_row;

OGSK_API const char* ogsk_version(void);
/* Message of the last failed call on this thread; empty if none. */
OGSK_API const char* ogsk_last_error(void);
OGSK_API const char* ogsk_status_string(ogsk_status status);

/* Experiment configuration. Keys are the long option names (m, snr, gamma,
 * ier, blocks, calib-blocks, seed, mode, ldpc-matrix, out, format,
 * reproducible, csr-gain, max-iter, threads, map-prior). */
OGSK_API ogsk_status ogsk_config_create(ogsk_config** out);
OGSK_API void ogsk_config_destroy(ogsk_config* cfg);
OGSK_API ogsk_status ogsk_config_set(ogsk_config* cfg, const char* key, const char* value);
OGSK_API ogsk_status ogsk_config_load_file(ogsk_config* cfg, const char* path);
OGSK_API ogsk_status ogsk_config_validate(const ogsk_config* cfg);
/* Output settings after file and flags are applied; *path may be "". */
OGSK_API ogsk_status ogsk_config_output(const ogsk_config* cfg, const char** path, ogsk_format* format,
                                        int* reproducible);

/* Runs "keyrate", "selection", "reconcile", "leakage" or "calibrate". */
OGSK_API ogsk_status ogsk_run(const ogsk_config* cfg, const char* experiment, ogsk_result** out);
OGSK_API void ogsk_result_destroy(ogsk_result* res);
OGSK_API size_t ogsk_result_row_count(const ogsk_result* res);
OGSK_API ogsk_status ogsk_result_row(const ogsk_result* res, size_t index, ogsk_row* out);
OGSK_API ogsk_status ogsk_result_calibration(const ogsk_result* res, size_t* points, size_t* failures);
/* Writes to path, or stdout when path is NULL, empty or "-". */
OGSK_API ogsk_status ogsk_result_write(const ogsk_result* res, ogsk_format format, const char* path,
                                       int reproducible);
/* Copies the rendered table into buf (NUL-terminated when it fits) and
 * stores the required size including the terminator in *needed. */
OGSK_API ogsk_status ogsk_result_render(const ogsk_result* res, ogsk_format format, int reproducible,
                                        char* buf, size_t cap, size_t* needed);

/* Square 2^m-QAM. */
OGSK_API ogsk_status ogsk_constellation_create(int m, ogsk_constellation** out);
OGSK_API void ogsk_constellation_destroy(ogsk_constellation* c);
OGSK_API size_t ogsk_constellation_size(const ogsk_constellation* c);
OGSK_API double ogsk_constellation_e_avg(const ogsk_constellation* c);
OGSK_API ogsk_status ogsk_quantize(const ogsk_constellation* c, double re, double im, double* out_re,
                                   double* out_im);

/* LDPC parity-check matrices and syndrome decoding. */
OGSK_API ogsk_status ogsk_ldpc_default(ogsk_ldpc** out);
OGSK_API ogsk_status ogsk_ldpc_load_alist(const char* path, ogsk_ldpc** out);
OGSK_API void ogsk_ldpc_destroy(ogsk_ldpc* h);
OGSK_API size_t ogsk_ldpc_n(const ogsk_ldpc* h);
OGSK_API size_t ogsk_ldpc_k(const ogsk_ldpc* h);
/* syndrome_out holds n - k bytes. */
OGSK_API ogsk_status ogsk_ldpc_syndrome(const ogsk_ldpc* h, const uint8_t* bits, size_t n, uint8_t* syndrome_out);
/* llrs are log(P0/P1); bits_out holds n bytes. */
OGSK_API ogsk_status ogsk_ldpc_decode(const ogsk_ldpc* h, const double* llrs, size_t n, const uint8_t* syndrome,
                                      int max_iter, uint8_t* bits_out, int* converged);

#ifdef __cplusplus
}
#endif

#endif /* OGSK_OGSK_H */
