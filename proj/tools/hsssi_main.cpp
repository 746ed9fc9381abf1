// Command-line front end; talks to the library exclusively through the
// shared C API in hsssi.h. Exit codes: 0 success, 1 failed checks,
// 2 configuration/validation errors.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "hsssi.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int status_exit(hsssi_status st) {
  if (st == HSSSI_OK) return 0;
  std::cerr << "error: " << hsssi_last_error() << "\n";
  return (st == HSSSI_ERR_INVALID_ARGUMENT || st == HSSSI_ERR_VALIDATION) ? 2 : 1;
}

void print_and_free(char* s) {
  if (s) {
    std::cout << s << "\n";
    hsssi_string_free(s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hsssi: heavy-tailed particle systems and their stable H-sssi limits"};
  app.require_subcommand(1);

  // --- validate ---------------------------------------------------------
  std::string cfg_path;
  auto* validate = app.add_subcommand("validate", "validate an experiment config");
  validate->add_option("--config", cfg_path, "config JSON file")->required();
  validate->callback([&]() {
    char* report = nullptr;
    const auto st = hsssi_validate_config(read_file(cfg_path).c_str(), &report);
    if (report && report[0]) std::cout << report;
    if (report) hsssi_string_free(report);
    if (st == HSSSI_OK) std::cout << "ok\n";
    std::exit(status_exit(st));
  });

  // --- run --------------------------------------------------------------
  std::string run_cfg, run_out = "out";
  auto* run = app.add_subcommand("run", "run a configured experiment end to end");
  run->add_option("--config", run_cfg, "config JSON file")->required();
  run->add_option("--out", run_out, "output directory");
  run->callback([&]() {
    char* summary = nullptr;
    int failures = 0;
    const auto st =
        hsssi_run_experiment(read_file(run_cfg).c_str(), run_out.c_str(), &summary,
                             &failures);
    print_and_free(summary);
    if (st != HSSSI_OK) std::exit(status_exit(st));
    std::exit(failures > 0 ? 1 : 0);
  });

  // --- simulate-path ----------------------------------------------------
  std::string sp_kind = "pure-stable", sp_f = "log", sp_out = "path.bin";
  double sp_beta = 1.5, sp_horizon = 1.0, sp_dt = 1e-3;
  std::uint64_t sp_seed = 0, sp_stream = 0;
  bool sp_seed_set = false;
  auto* spath = app.add_subcommand("simulate-path", "simulate one trajectory and dump it");
  spath->add_option("--beta", sp_beta, "stability index in (1,2)");
  spath->add_option("--kind", sp_kind, "pure-stable | rv-density");
  spath->add_option("--f", sp_f, "slowly-varying preset for rv-density");
  spath->add_option("--horizon", sp_horizon, "time horizon");
  spath->add_option("--dt", sp_dt, "grid step");
  spath->add_option("--seed", sp_seed, "rng seed (required)")->each([&](std::string) {
    sp_seed_set = true;
  });
  spath->add_option("--stream", sp_stream, "rng stream id");
  spath->add_option("--out", sp_out, "output dump file");
  spath->callback([&]() {
    if (!sp_seed_set) {
      std::cerr << "error: --seed is required (no wall-clock default)\n";
      std::exit(2);
    }
    std::ostringstream spec;
    spec << "{\"kind\":\"" << sp_kind << "\",\"beta\":" << sp_beta << ",\"f\":\""
         << sp_f << "\"}";
    std::exit(status_exit(hsssi_simulate_path_dump(spec.str().c_str(), sp_horizon,
                                                   sp_dt, sp_seed, sp_stream,
                                                   sp_out.c_str())));
  });

  // --- localtime-moments --------------------------------------------------
  double lm_beta = 1.5, lm_t = 1.0, lm_x = 0.0;
  int lm_n = 1;
  auto* lm = app.add_subcommand("localtime-moments",
                                "exact local-time moment E L_t(x)^n");
  lm->add_option("--beta", lm_beta, "stability index");
  lm->add_option("--t", lm_t, "time");
  lm->add_option("--x", lm_x, "space point");
  lm->add_option("--n", lm_n, "moment order (1..4)");
  lm->callback([&]() {
    double v = 0.0;
    const auto st = hsssi_local_time_moment(lm_beta, lm_t, lm_x, lm_n, &v);
    if (st == HSSSI_OK) std::printf("%.5f\n", v);
    std::exit(status_exit(st));
  });

  // --- prop1 / rosen / particles: ladder experiments from flags -----------
  auto add_ladder = [&](const char* name, const char* kind, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    auto opts = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>("out");
    sub->add_option("--config", *opts, "config JSON file")->required();
    sub->add_option("--out", *out_dir, "output directory");
    const std::string kind_str = kind;
    sub->callback([opts, out_dir, kind_str]() {
      std::string text = read_file(*opts);
      // Force the subcommand's kind over whatever the file says.
      const auto pos = text.rfind('}');
      if (pos != std::string::npos) {
        text = text.substr(0, pos) + ",\"kind\":\"" + kind_str + "\"}";
      }
      char* summary = nullptr;
      int failures = 0;
      const auto st = hsssi_run_experiment(text.c_str(), out_dir->c_str(), &summary,
                                           &failures);
      print_and_free(summary);
      if (st != HSSSI_OK) std::exit(status_exit(st));
      std::exit(failures > 0 ? 1 : 0);
    });
  };
  add_ladder("prop1", "prop1-ladder", "single-path first-order occupation ladder");
  add_ladder("rosen", "rosen-ladder", "single-path second-order (Rosen) ladder");
  add_ladder("particles", "particle-ladder", "particle-system functional ladder");

  // --- cf-limit -----------------------------------------------------------
  std::string cf_family = "first-order";
  double cf_alpha = 1.5, cf_beta = 1.5, cf_gamma1 = 1.1, cf_gamma2 = 1.1,
         cf_kappa = 1.0;
  std::vector<double> cf_theta;
  std::uint64_t cf_seed = 0;
  bool cf_seed_set = false;
  std::size_t cf_fields = 4000;
  auto* cf = app.add_subcommand("cf-limit", "limit-law characteristic function");
  cf->add_option("--family", cf_family, "limit family");
  cf->add_option("--alpha", cf_alpha, "weight tail index");
  cf->add_option("--beta", cf_beta, "motion index");
  cf->add_option("--gamma1", cf_gamma1, "heavy-tail exponent");
  cf->add_option("--gamma2", cf_gamma2, "second heavy-tail exponent");
  cf->add_option("--kappa", cf_kappa, "kernel constant (int phi or c(phi))");
  cf->add_option("--theta", cf_theta, "theta grid points")->expected(-1);
  cf->add_option("--fields", cf_fields, "pool size");
  cf->add_option("--seed", cf_seed, "rng seed (required)")->each([&](std::string) {
    cf_seed_set = true;
  });
  cf->callback([&]() {
    if (!cf_seed_set) {
      std::cerr << "error: --seed is required (no wall-clock default)\n";
      std::exit(2);
    }
    if (cf_theta.empty()) cf_theta = {0.0, 0.5, 1.0, 2.0};
    std::ostringstream req;
    req.precision(17);
    req << "{\"family\":\"" << cf_family << "\",\"alpha\":" << cf_alpha
        << ",\"beta\":" << cf_beta << ",\"gamma1\":" << cf_gamma1
        << ",\"gamma2\":" << cf_gamma2 << ",\"kappa\":" << cf_kappa
        << ",\"seed\":" << cf_seed << ",\"pool\":{\"n_fields\":" << cf_fields
        << ",\"dt\":0.001},\"theta\":[";
    for (std::size_t i = 0; i < cf_theta.size(); ++i)
      req << (i ? "," : "") << cf_theta[i];
    req << "]}";
    char* result = nullptr;
    const auto st = hsssi_cf_limit(req.str().c_str(), &result);
    print_and_free(result);
    std::exit(status_exit(st));
  });

  // --- compare ------------------------------------------------------------
  std::string cmp_samples, cmp_target;
  std::vector<double> cmp_coeffs{1.0}, cmp_times{1.0};
  double cmp_alpha = 1.5, cmp_ksigma = 3.0;
  bool cmp_fit = false;
  auto* cmp = app.add_subcommand("compare", "compare sample ECF against a CF target");
  cmp->add_option("--samples", cmp_samples, "JSONL sample stream")->required();
  cmp->add_option("--target", cmp_target, "target CF csv")->required();
  cmp->add_option("--coeffs", cmp_coeffs, "query coefficients")->expected(-1);
  cmp->add_option("--times", cmp_times, "query times")->expected(-1);
  cmp->add_option("--alpha", cmp_alpha, "stability index of the target");
  cmp->add_option("--k-sigma", cmp_ksigma, "tolerance multiplier");
  cmp->add_flag("--fit-scale", cmp_fit, "fit one multiplicative scale first");
  cmp->callback([&]() {
    std::ostringstream req;
    req.precision(17);
    req << "{\"samples\":\"" << cmp_samples << "\",\"target\":\"" << cmp_target
        << "\",\"alpha\":" << cmp_alpha << ",\"k_sigma\":" << cmp_ksigma
        << ",\"fit_scale\":" << (cmp_fit ? "true" : "false") << ",\"coeffs\":[";
    for (std::size_t i = 0; i < cmp_coeffs.size(); ++i)
      req << (i ? "," : "") << cmp_coeffs[i];
    req << "],\"times\":[";
    for (std::size_t i = 0; i < cmp_times.size(); ++i)
      req << (i ? "," : "") << cmp_times[i];
    req << "]}";
    char* result = nullptr;
    const auto st = hsssi_compare(req.str().c_str(), &result);
    print_and_free(result);
    std::exit(status_exit(st));
  });

  // --- report -------------------------------------------------------------
  std::string rep_dir;
  auto* rep = app.add_subcommand("report", "aggregate run summaries in a directory");
  rep->add_option("--dir", rep_dir, "run directory")->required();
  rep->callback([&]() {
    char* result = nullptr;
    const auto st = hsssi_report_run_dir(rep_dir.c_str(), &result);
    print_and_free(result);
    std::exit(status_exit(st));
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
