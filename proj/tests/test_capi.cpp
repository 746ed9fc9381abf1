#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "doctest.h"
#include "hsssi.h"

TEST_CASE("model handle: psi values and error reporting") {
  hsssi_model* m = nullptr;
  REQUIRE(hsssi_model_create("{\"kind\":\"pure-stable\",\"beta\":1.5}", &m) == HSSSI_OK);
  double v = 0.0;
  CHECK(hsssi_model_psi(m, 2.0, &v) == HSSSI_OK);
  CHECK(v == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK(hsssi_model_psi_scaled(m, 1e6, 1.3, &v) == HSSSI_OK);
  CHECK(v == doctest::Approx(std::pow(1.3, 1.5)).epsilon(1e-12));
  hsssi_model_free(m);

  hsssi_model* bad = nullptr;
  CHECK(hsssi_model_create("{\"kind\":\"weird\"}", &bad) == HSSSI_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(hsssi_last_error()) > 0);
  CHECK(hsssi_model_create("not json", &bad) != HSSSI_OK);
}

TEST_CASE("phi handle, c(phi) conventions, divergence surfaces as validation") {
  hsssi_phi* p = nullptr;
  REQUIRE(hsssi_phi_create("{\"kind\":\"haar\"}", &p) == HSSSI_OK);
  double v = 1.0;
  CHECK(hsssi_phi_integral(p, &v) == HSSSI_OK);
  CHECK(v == 0.0);
  CHECK(hsssi_phi_eval(p, 0.5, &v) == HSSSI_OK);
  CHECK(v == 1.0);
  double re = 0, im = 0;
  CHECK(hsssi_phi_fourier(p, 1.0, &re, &im) == HSSSI_OK);
  CHECK(re * re + im * im ==
        doctest::Approx(std::pow(2.0 - 2.0 * std::cos(1.0), 2)).epsilon(1e-9));

  hsssi_model* m = nullptr;
  REQUIRE(hsssi_model_create("{\"kind\":\"pure-stable\",\"beta\":1.5}", &m) == HSSSI_OK);
  double c = 0, integral = 0;
  CHECK(hsssi_c_phi(p, m, nullptr, &c, &integral) == HSSSI_OK);
  CHECK(c == doctest::Approx(std::sqrt(4.4299922 / M_PI)).epsilon(1e-5));
  double c2 = 0;
  CHECK(hsssi_c_phi(p, m, "proposition2", &c2, nullptr) == HSSSI_OK);
  CHECK(c2 == doctest::Approx(std::sqrt(4.4299922) / M_PI).epsilon(1e-5));

  hsssi_phi* heavy = nullptr;
  REQUIRE(hsssi_phi_create("{\"kind\":\"heavy-pair\",\"gamma1\":1.1,\"gamma2\":1.2}",
                           &heavy) == HSSSI_OK);
  CHECK(hsssi_c_phi(heavy, m, nullptr, &c, nullptr) == HSSSI_ERR_VALIDATION);
  hsssi_phi_free(heavy);
  hsssi_phi_free(p);
  hsssi_model_free(m);
}

TEST_CASE("scalar helpers: moments, hurst, normalization") {
  double v = 0;
  CHECK(hsssi_local_time_moment(1.5, 1.0, 0.0, 1, &v) == HSSSI_OK);
  CHECK(v == doctest::Approx(0.862058).epsilon(1e-5));
  CHECK(hsssi_local_time_moment(1.5, 1.0, 0.0, 9, &v) == HSSSI_ERR_INVALID_ARGUMENT);

  CHECK(hsssi_hurst("second-order", 1.5, 1.5, 0, 0, &v) == HSSSI_OK);
  CHECK(v == doctest::Approx(11.0 / 18.0).epsilon(1e-12));
  CHECK(hsssi_hurst("heavy-symmetric", 4.0 / 3.0, 1.5, 1.1, 0, &v) == HSSSI_OK);
  CHECK(v == doctest::Approx(0.766667).epsilon(1e-5));
  CHECK(hsssi_hurst("nope", 1.5, 1.5, 0, 0, &v) == HSSSI_ERR_INVALID_ARGUMENT);

  double scale = 0, ct = 0, dt = 0;
  CHECK(hsssi_normalization("first-order", 1e3, 1.5, 1.5, 0, "constant", "constant",
                            "constant", &scale, &ct, &dt) == HSSSI_OK);
  CHECK(scale == doctest::Approx(215.443469).epsilon(1e-8));
  CHECK(dt == doctest::Approx(1000.0));
}

TEST_CASE("validate/run/report round trip through the C API") {
  const char* good =
      "{\"seed\":5,\"kind\":\"rosen-ladder\",\"regime\":{\"family\":\"second-order\"},"
      "\"phi\":{\"kind\":\"haar\"},\"T_ladder\":[40],\"replicas\":64,\"times\":[1.0]}";
  char* report = nullptr;
  CHECK(hsssi_validate_config(good, &report) == HSSSI_OK);
  hsssi_string_free(report);

  const char* unknown_key = "{\"seed\":5,\"alpha_\":1.5}";
  char* rep2 = nullptr;
  CHECK(hsssi_validate_config(unknown_key, &rep2) == HSSSI_ERR_INVALID_ARGUMENT);
  CHECK(std::string(hsssi_last_error()).find("alpha_") != std::string::npos);

  const char* no_seed = "{\"kind\":\"rosen-ladder\"}";
  CHECK(hsssi_validate_config(no_seed, &rep2) == HSSSI_ERR_INVALID_ARGUMENT);

  // Thm-3 window violation: gamma=1.4 against beta=1.5.
  const char* bad_gamma =
      "{\"seed\":5,\"regime\":{\"family\":\"heavy-symmetric\",\"gamma1\":1.4},"
      "\"phi\":{\"kind\":\"heavy-pair\",\"gamma1\":1.4,\"gamma2\":1.4}}";
  char* rep3 = nullptr;
  CHECK(hsssi_validate_config(bad_gamma, &rep3) == HSSSI_ERR_VALIDATION);
  CHECK(std::string(rep3).find("THM3") != std::string::npos);
  hsssi_string_free(rep3);

  char* summary = nullptr;
  int failures = -1;
  CHECK(hsssi_run_experiment(good, "capi_run_out", &summary, &failures) == HSSSI_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("\"kind\": \"rosen-ladder\"") != std::string::npos);
  hsssi_string_free(summary);

  char* report_all = nullptr;
  CHECK(hsssi_report_run_dir("capi_run_out", &report_all) == HSSSI_OK);
  CHECK(std::string(report_all).find("hsssi-report/1") != std::string::npos);
  hsssi_string_free(report_all);
}

TEST_CASE("path dump and particle csv through the C API") {
  CHECK(hsssi_simulate_path_dump("{\"kind\":\"pure-stable\",\"beta\":1.5}", 0.25,
                                 1e-3, 7, 1, "capi_path.bin") == HSSSI_OK);
  std::FILE* f = std::fopen("capi_path.bin", "rb");
  REQUIRE(f != nullptr);
  double dt = 0, horizon = 0;
  std::uint64_t count = 0;
  REQUIRE(std::fread(&dt, sizeof dt, 1, f) == 1);
  REQUIRE(std::fread(&horizon, sizeof horizon, 1, f) == 1);
  REQUIRE(std::fread(&count, sizeof count, 1, f) == 1);
  std::fclose(f);
  CHECK(dt == 1e-3);
  CHECK(horizon == 0.25);
  CHECK(count == 251);
  std::remove("capi_path.bin");

  CHECK(hsssi_sample_particles_csv(
            "{\"alpha\":1.5,\"epsilon\":1.0,\"window\":[-2,2],\"seed\":3}",
            "capi_parts.csv") == HSSSI_OK);
  std::remove("capi_parts.csv");

  CHECK(hsssi_sample_particles_csv("{\"alpha\":1.5}", "x.csv") ==
        HSSSI_ERR_INVALID_ARGUMENT);  // missing seed
}

TEST_CASE("cf-limit request returns one at theta zero") {
  const char* req =
      "{\"family\":\"first-order\",\"alpha\":1.5,\"beta\":1.5,\"kappa\":1.0,"
      "\"seed\":11,\"theta\":[0.0,0.5],\"coeffs\":[1.0],\"times\":[1.0],"
      "\"pool\":{\"n_fields\":200,\"dt\":0.002,\"grid_half_width\":10,"
      "\"integral_half_width\":6}}";
  char* result = nullptr;
  REQUIRE(hsssi_cf_limit(req, &result) == HSSSI_OK);
  const std::string s(result);
  CHECK(s.find("\"re\"") != std::string::npos);
  CHECK(s.find("1.0") != std::string::npos);
  hsssi_string_free(result);
}
