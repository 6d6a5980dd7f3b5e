/*
 * (C) Copyright 2026 The ogsk Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// Exercises the shared library through its C header only.
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "ogsk/ogsk.h"

namespace {

struct Config {
  ogsk_config* p = nullptr;
  Config() { REQUIRE(ogsk_config_create(&p) == OGSK_OK); }
  ~Config() { ogsk_config_destroy(p); }
};

struct Result {
  ogsk_result* p = nullptr;
  ~Result() { ogsk_result_destroy(p); }
};

std::string render(const ogsk_result* r, ogsk_format f) {
  size_t needed = 0;
  REQUIRE(ogsk_result_render(r, f, 1, nullptr, 0, &needed) == OGSK_OK);
  std::string s(needed, '\0');
  REQUIRE(ogsk_result_render(r, f, 1, s.data(), s.size(), &needed) == OGSK_OK);
  s.resize(needed - 1);
  return s;
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::strlen(ogsk_version()) > 0);
  CHECK(std::string(ogsk_status_string(OGSK_OK)).size() > 0);
  CHECK(std::string(ogsk_status_string(OGSK_ERR_CONFIG)) != ogsk_status_string(OGSK_ERR_PARSE));
  CHECK(ogsk_status_string(static_cast<ogsk_status>(99)) != nullptr);
}

TEST_CASE("config handling") {
  Config cfg;
  CHECK(ogsk_config_set(cfg.p, "m", "4") == OGSK_OK);
  CHECK(ogsk_config_set(cfg.p, "format", "json") == OGSK_OK);
  CHECK(ogsk_config_set(cfg.p, "out", "x.json") == OGSK_OK);
  const char* path = nullptr;
  ogsk_format fmt = OGSK_FORMAT_CSV;
  int repro = -1;
  CHECK(ogsk_config_output(cfg.p, &path, &fmt, &repro) == OGSK_OK);
  CHECK(std::string(path) == "x.json");
  CHECK(fmt == OGSK_FORMAT_JSON);
  CHECK(repro == 0);

  CHECK(ogsk_config_set(cfg.p, "nonsense", "1") == OGSK_ERR_CONFIG);
  CHECK(std::string(ogsk_last_error()).find("nonsense") != std::string::npos);
  CHECK(ogsk_config_set(cfg.p, "m", "3") == OGSK_OK);
  CHECK(ogsk_config_validate(cfg.p) == OGSK_ERR_CONFIG);
  CHECK(ogsk_config_load_file(cfg.p, "/nonexistent/cfg.ini") == OGSK_ERR_CONFIG);
  CHECK(ogsk_config_set(nullptr, "m", "4") == OGSK_ERR_INVALID_ARGUMENT);
  CHECK(ogsk_config_set(cfg.p, nullptr, "4") == OGSK_ERR_INVALID_ARGUMENT);
  CHECK(ogsk_config_create(nullptr) == OGSK_ERR_INVALID_ARGUMENT);
  ogsk_config_destroy(nullptr);
}

TEST_CASE("running an experiment") {
  Config cfg;
  for (auto [k, v] : {std::pair{"m", "4"}, {"snr", "25"}, {"ier", "0.1"}, {"blocks", "3000"}, {"seed", "2"}})
    REQUIRE(ogsk_config_set(cfg.p, k, v) == OGSK_OK);
  Result res;
  REQUIRE(ogsk_run(cfg.p, "keyrate", &res.p) == OGSK_OK);
  const size_t n = ogsk_result_row_count(res.p);
  CHECK(n > 5);
  bool found = false;
  for (size_t i = 0; i < n; ++i) {
    ogsk_row row;
    REQUIRE(ogsk_result_row(res.p, i, &row) == OGSK_OK);
    CHECK(std::string(row.experiment) == "keyrate");
    CHECK(row.m == 4);
    CHECK(row.snr_db == 25);
    CHECK(row.has_target_ier == 1);
    CHECK(row.seed == 2);
    if (std::string(row.metric) == "key_rate" && std::string(row.mode) == "opportunistic") {
      found = true;
      CHECK(row.value > 0.0);
      CHECK(row.value <= 1.0);
    }
  }
  CHECK(found);
  ogsk_row row;
  CHECK(ogsk_result_row(res.p, n, &row) == OGSK_ERR_DOMAIN);
  size_t points = 0, failures = 9;
  CHECK(ogsk_result_calibration(res.p, &points, &failures) == OGSK_OK);
  CHECK(points == 1);
  CHECK(failures == 0);

  const std::string csv = render(res.p, OGSK_FORMAT_CSV);
  CHECK(csv.rfind("experiment,m,snr_db,target_ier,mode,metric,value,n,seed\n", 0) == 0);
  CHECK(render(res.p, OGSK_FORMAT_JSON).find("\"rows\"") != std::string::npos);
  char small[4];
  size_t needed = 0;
  CHECK(ogsk_result_render(res.p, OGSK_FORMAT_CSV, 1, small, sizeof small, &needed) == OGSK_OK);
  CHECK(needed == csv.size() + 1);

  Result again;
  REQUIRE(ogsk_run(cfg.p, "keyrate", &again.p) == OGSK_OK);
  CHECK(render(again.p, OGSK_FORMAT_CSV) == csv);

  CHECK(ogsk_result_write(res.p, OGSK_FORMAT_CSV, "/nonexistent/dir/out.csv", 1) == OGSK_ERR_IO);
  Result bad;
  CHECK(ogsk_run(cfg.p, "unknown", &bad.p) == OGSK_ERR_CONFIG);
  CHECK(bad.p == nullptr);
}

TEST_CASE("calibration failures are counted") {
  Config cfg;
  for (auto [k, v] : {std::pair{"m", "4"}, {"snr", "10"}, {"ier", "0.01"}, {"blocks", "2000"}})
    REQUIRE(ogsk_config_set(cfg.p, k, v) == OGSK_OK);
  Result res;
  REQUIRE(ogsk_run(cfg.p, "keyrate", &res.p) == OGSK_OK);
  size_t points = 0, failures = 0;
  ogsk_result_calibration(res.p, &points, &failures);
  CHECK(points == 1);
  CHECK(failures == 1);
}

TEST_CASE("constellation") {
  ogsk_constellation* c = nullptr;
  REQUIRE(ogsk_constellation_create(4, &c) == OGSK_OK);
  CHECK(ogsk_constellation_size(c) == 16);
  CHECK(ogsk_constellation_e_avg(c) == doctest::Approx(10.0));
  double re = 0, im = 0;
  CHECK(ogsk_quantize(c, 0.9, -2.6, &re, &im) == OGSK_OK);
  CHECK(re == 1.0);
  CHECK(im == -3.0);
  CHECK(ogsk_quantize(c, 2.0, 0.0, &re, &im) == OGSK_OK);
  CHECK(re == 3.0);
  CHECK(im == 1.0);
  ogsk_constellation_destroy(c);
  ogsk_constellation* bad = nullptr;
  CHECK(ogsk_constellation_create(3, &bad) == OGSK_ERR_DOMAIN);
  CHECK(bad == nullptr);
}

TEST_CASE("ldpc") {
  ogsk_ldpc* h = nullptr;
  REQUIRE(ogsk_ldpc_default(&h) == OGSK_OK);
  CHECK(ogsk_ldpc_n(h) == 12);
  CHECK(ogsk_ldpc_k(h) == 9);
  std::vector<uint8_t> x{1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 1};
  std::vector<uint8_t> s(3);
  REQUIRE(ogsk_ldpc_syndrome(h, x.data(), x.size(), s.data()) == OGSK_OK);
  std::vector<double> llr(12);
  for (int j = 0; j < 12; ++j) llr[j] = x[j] ? -4.0 : 4.0;
  llr[5] = 0.2;
  llr[6] = 0.1;  // weak and wrong
  std::vector<uint8_t> out(12);
  int converged = 0;
  REQUIRE(ogsk_ldpc_decode(h, llr.data(), 12, s.data(), 50, out.data(), &converged) == OGSK_OK);
  CHECK(converged == 1);
  CHECK(out == x);
  CHECK(ogsk_ldpc_syndrome(h, x.data(), 11, s.data()) == OGSK_ERR_DOMAIN);
  CHECK(ogsk_ldpc_decode(h, llr.data(), 12, s.data(), 0, out.data(), &converged) == OGSK_ERR_DOMAIN);
  ogsk_ldpc_destroy(h);

  ogsk_ldpc* big = nullptr;
  REQUIRE(ogsk_ldpc_load_alist(OGSK_DATA_DIR "/ldpc_648_486.alist", &big) == OGSK_OK);
  CHECK(ogsk_ldpc_n(big) == 648);
  CHECK(ogsk_ldpc_k(big) == 486);
  ogsk_ldpc_destroy(big);
  ogsk_ldpc* missing = nullptr;
  CHECK(ogsk_ldpc_load_alist("/nonexistent.alist", &missing) == OGSK_ERR_IO);
}
