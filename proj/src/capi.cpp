#include "hsssi.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "json.hpp"

#include "core/analysis.hpp"
#include "core/experiment.hpp"
#include "core/functionals.hpp"
#include "core/limits.hpp"
#include "core/localtime.hpp"
#include "core/model.hpp"
#include "core/sampling.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

/// Boundary wrapper: converts exceptions into status codes + message.
template <typename Fn>
hsssi_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const hsssi::ConfigError& e) {
    set_error(e.what());
    return HSSSI_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return HSSSI_ERR_VALIDATION;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return HSSSI_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return HSSSI_ERR_RUNTIME;
  }
}

hsssi::LevyModel parse_model_json(const char* text) {
  if (!text) throw std::invalid_argument("model spec is null");
  const json spec = json::parse(text);
  const std::string kind = spec.value("kind", "pure-stable");
  const double beta = spec.value("beta", 1.5);
  if (kind == "pure-stable") return hsssi::LevyModel::pure_stable(beta);
  if (kind == "rv-density") {
    auto sv = hsssi::SlowlyVarying::from_name(spec.value("f", "log"), spec.value("c", 1.0));
    if (!sv) throw std::invalid_argument("unknown slowly-varying preset");
    return hsssi::LevyModel::rv_density(beta, *sv);
  }
  throw std::invalid_argument("unknown model kind \"" + kind + "\"");
}

hsssi::LimitFamily parse_family_name(const char* name) {
  const std::string f = name ? name : "";
  if (f == "first-order") return hsssi::LimitFamily::FirstOrder;
  if (f == "second-order") return hsssi::LimitFamily::SecondOrder;
  if (f == "heavy-symmetric") return hsssi::LimitFamily::HeavySymmetric;
  if (f == "heavy-asymmetric") return hsssi::LimitFamily::HeavyAsymmetric;
  throw std::invalid_argument("unknown limit family \"" + f + "\"");
}

}  // namespace

struct hsssi_model {
  hsssi::LevyModel impl;
};

struct hsssi_phi {
  hsssi::TestFunctionPhi impl;
};

extern "C" {

const char* hsssi_version(void) { return "1.0.0"; }

const char* hsssi_last_error(void) { return g_last_error.c_str(); }

void hsssi_string_free(char* s) { delete[] s; }

hsssi_status hsssi_model_create(const char* json_spec, hsssi_model** out) {
  return guarded([&]() {
    if (!out) throw std::invalid_argument("output handle is null");
    *out = new hsssi_model{parse_model_json(json_spec)};
    return HSSSI_OK;
  });
}

void hsssi_model_free(hsssi_model* m) { delete m; }

hsssi_status hsssi_model_psi(const hsssi_model* m, double z, double* out) {
  return guarded([&]() {
    if (!m || !out) throw std::invalid_argument("null argument");
    *out = hsssi::psi(m->impl, z);
    return HSSSI_OK;
  });
}

hsssi_status hsssi_model_psi_scaled(const hsssi_model* m, double T, double z,
                                    double* out) {
  return guarded([&]() {
    if (!m || !out) throw std::invalid_argument("null argument");
    *out = hsssi::psi_scaled(m->impl, T, z);
    return HSSSI_OK;
  });
}

hsssi_status hsssi_phi_create(const char* json_spec, hsssi_phi** out) {
  return guarded([&]() {
    if (!json_spec || !out) throw std::invalid_argument("null argument");
    // Reuse the strict experiment parser by embedding the spec.
    json cfg;
    cfg["seed"] = 0;
    cfg["phi"] = json::parse(json_spec);
    auto parsed = hsssi::ExperimentConfig::from_json_text(cfg.dump());
    *out = new hsssi_phi{parsed.phi};
    return HSSSI_OK;
  });
}

void hsssi_phi_free(hsssi_phi* p) { delete p; }

hsssi_status hsssi_phi_eval(const hsssi_phi* p, double y, double* out) {
  return guarded([&]() {
    if (!p || !out) throw std::invalid_argument("null argument");
    *out = p->impl(y);
    return HSSSI_OK;
  });
}

hsssi_status hsssi_phi_integral(const hsssi_phi* p, double* out) {
  return guarded([&]() {
    if (!p || !out) throw std::invalid_argument("null argument");
    *out = p->impl.integral();
    return HSSSI_OK;
  });
}

hsssi_status hsssi_phi_fourier(const hsssi_phi* p, double w, double* re, double* im) {
  return guarded([&]() {
    if (!p || !re || !im) throw std::invalid_argument("null argument");
    const auto v = p->impl.fourier(w);
    *re = v.real();
    *im = v.imag();
    return HSSSI_OK;
  });
}

hsssi_status hsssi_c_phi(const hsssi_phi* p, const hsssi_model* m,
                         const char* convention, double* value, double* integral) {
  return guarded([&]() {
    if (!p || !m || !value) throw std::invalid_argument("null argument");
    const std::string conv = convention ? convention : "sqrt-pi-inverse";
    hsssi::CPhiConvention c = hsssi::CPhiConvention::SqrtPiInverse;
    if (conv == "proposition2")
      c = hsssi::CPhiConvention::Proposition2;
    else if (conv == "plain-l2")
      c = hsssi::CPhiConvention::PlainL2;
    else if (conv != "sqrt-pi-inverse")
      throw std::invalid_argument("unknown c(phi) convention \"" + conv + "\"");
    const auto r = hsssi::c_phi(p->impl, m->impl, c);
    *value = r.value;
    if (integral) *integral = r.integral;
    return HSSSI_OK;
  });
}

hsssi_status hsssi_local_time_moment(double beta, double t, double x, int n,
                                     double* out) {
  return guarded([&]() {
    if (!out) throw std::invalid_argument("null argument");
    *out = hsssi::local_time_moment_exact(beta, t, x, n);
    return HSSSI_OK;
  });
}

hsssi_status hsssi_hurst(const char* family, double alpha, double beta, double gamma1,
                         double gamma2, double* out) {
  return guarded([&]() {
    if (!out) throw std::invalid_argument("null argument");
    hsssi::LimitSpec spec;
    spec.family = parse_family_name(family);
    spec.params.alpha = alpha;
    spec.params.beta = beta;
    spec.gamma1 = gamma1;
    spec.gamma2 = gamma2 > 0 ? gamma2 : gamma1;
    *out = hsssi::hurst(spec);
    return HSSSI_OK;
  });
}

hsssi_status hsssi_normalization(const char* family, double T, double alpha,
                                 double beta, double gamma_min, const char* f_preset,
                                 const char* L_preset, const char* g1_preset,
                                 double* scale, double* C_T, double* D_T) {
  return guarded([&]() {
    if (!scale || !C_T || !D_T) throw std::invalid_argument("null argument");
    auto sv = [](const char* name) {
      auto p = hsssi::SlowlyVarying::from_name(name ? name : "constant");
      if (!p) throw std::invalid_argument("unknown slowly-varying preset");
      return *p;
    };
    hsssi::ModelParams params;
    params.alpha = alpha;
    params.beta = beta;
    const auto n = hsssi::normalization(parse_family_name(family), T, params,
                                        sv(f_preset), sv(L_preset), sv(g1_preset),
                                        gamma_min);
    *scale = n.scale;
    *C_T = n.C_T;
    *D_T = n.D_T;
    return HSSSI_OK;
  });
}

hsssi_status hsssi_validate_config(const char* config_json, char** report) {
  return guarded([&]() {
    if (!config_json) throw std::invalid_argument("config is null");
    const auto cfg = hsssi::ExperimentConfig::from_json_text(config_json);
    const auto r = hsssi::validate(cfg.regime, cfg.phi);
    if (report) *report = dup_string(r.to_string());
    if (!r.ok()) {
      set_error(r.to_string());
      return HSSSI_ERR_VALIDATION;
    }
    return HSSSI_OK;
  });
}

hsssi_status hsssi_run_experiment(const char* config_json, const char* out_dir,
                                  char** summary_json, int* check_failures) {
  return guarded([&]() {
    if (!config_json || !out_dir) throw std::invalid_argument("null argument");
    const auto cfg = hsssi::ExperimentConfig::from_json_text(config_json);
    const auto summary = hsssi::run_experiment(cfg, out_dir);
    if (summary_json) *summary_json = dup_string(summary.to_json_text());
    if (check_failures) {
      int fails = 0;
      for (const auto& c : summary.checks) fails += c.pass ? 0 : 1;
      *check_failures = fails;
    }
    return HSSSI_OK;
  });
}

hsssi_status hsssi_simulate_path_dump(const char* model_json, double horizon,
                                      double dt, uint64_t seed, uint64_t stream,
                                      const char* out_file) {
  return guarded([&]() {
    if (!out_file) throw std::invalid_argument("output path is null");
    const auto model = parse_model_json(model_json);
    const auto path =
        hsssi::simulate_path(model, horizon, dt, hsssi::RngSpec{seed, stream});
    hsssi::write_path_dump(path, out_file);
    return HSSSI_OK;
  });
}

hsssi_status hsssi_sample_particles_csv(const char* request_json,
                                        const char* out_file) {
  return guarded([&]() {
    if (!request_json || !out_file) throw std::invalid_argument("null argument");
    const json req = json::parse(request_json);
    hsssi::ModelParams params;
    params.alpha = req.value("alpha", 1.5);
    params.epsilon_cut = req.value("epsilon", 1.0);
    auto L = hsssi::SlowlyVarying::constant();
    if (req.contains("L")) {
      auto sv = hsssi::SlowlyVarying::from_name(req.at("L").value("preset", "constant"),
                                                req.at("L").value("c", 1.0));
      if (!sv) throw std::invalid_argument("unknown weight preset");
      L = *sv;
    }
    const auto window = req.value("window", std::vector<double>{-10.0, 10.0});
    if (window.size() != 2) throw std::invalid_argument("window needs [lo, hi]");
    if (!req.contains("seed")) throw std::invalid_argument("request requires a seed");
    const auto field = hsssi::sample_particle_field(
        params, L, window[0], window[1],
        hsssi::RngSpec{req.at("seed").get<std::uint64_t>(),
                       req.value("stream", std::uint64_t{0})});
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error(std::string("cannot open ") + out_file);
    out << "# schema: hsssi-particles-csv/1\n";
    out << "x,z\n";
    out.precision(17);
    for (std::size_t i = 0; i < field.positions.size(); ++i)
      out << field.positions[i] << ',' << field.weights[i] << '\n';
    return HSSSI_OK;
  });
}

hsssi_status hsssi_cf_limit(const char* request_json, char** result_json) {
  return guarded([&]() {
    if (!request_json || !result_json) throw std::invalid_argument("null argument");
    const json req = json::parse(request_json);
    const auto family = parse_family_name(req.value("family", "first-order").c_str());
    const double alpha = req.value("alpha", 1.5);
    const double beta = req.value("beta", 1.5);
    hsssi::CfQuery q;
    q.theta = req.at("theta").get<std::vector<double>>();
    q.coeffs = req.value("coeffs", std::vector<double>{1.0});
    q.times = req.value("times", std::vector<double>{1.0});
    hsssi::FieldPoolConfig pool;
    if (req.contains("pool")) {
      const auto& p = req.at("pool");
      pool.n_fields = p.value("n_fields", pool.n_fields);
      pool.dt = p.value("dt", pool.dt);
      pool.dx = p.value("dx", pool.dx);
      pool.grid_half_width = p.value("grid_half_width", pool.grid_half_width);
      pool.integral_half_width =
          p.value("integral_half_width", pool.integral_half_width);
    }
    if (!req.contains("seed")) throw std::invalid_argument("request requires a seed");
    pool.rng = hsssi::RngSpec{req.at("seed").get<std::uint64_t>(), 0};
    const double kappa = req.value("kappa", 1.0);
    hsssi::CfCurve curve;
    switch (family) {
      case hsssi::LimitFamily::FirstOrder:
        curve = hsssi::cf_first_order(q, alpha, beta, kappa, pool);
        break;
      case hsssi::LimitFamily::SecondOrder:
        curve = hsssi::cf_second_order(q, alpha, beta, kappa, pool);
        break;
      case hsssi::LimitFamily::HeavySymmetric:
      case hsssi::LimitFamily::HeavyAsymmetric:
        curve = hsssi::cf_heavy(q, alpha, beta, req.value("gamma1", 1.1),
                                req.value("gamma2", 1.1),
                                family == hsssi::LimitFamily::HeavyAsymmetric, pool);
        break;
    }
    json out;
    out["theta"] = curve.theta;
    json re = json::array(), im = json::array(), se = json::array();
    for (std::size_t i = 0; i < curve.value.size(); ++i) {
      re.push_back(curve.value[i].real());
      im.push_back(curve.value[i].imag());
      se.push_back(curve.se[i]);
    }
    out["re"] = re;
    out["im"] = im;
    out["se"] = se;
    out["inner_J"] = curve.inner_J;
    out["inner_se"] = curve.inner_se;
    *result_json = dup_string(out.dump(2));
    return HSSSI_OK;
  });
}

hsssi_status hsssi_compare(const char* request_json, char** result_json) {
  return guarded([&]() {
    if (!request_json || !result_json) throw std::invalid_argument("null argument");
    const json req = json::parse(request_json);
    const auto samples = hsssi::read_samples_jsonl(req.at("samples").get<std::string>());
    // Target CSV as written by write_ecf_csv: the target_* columns when
    // present, the ecf columns otherwise.
    std::ifstream in(req.at("target").get<std::string>());
    if (!in) throw std::runtime_error("cannot open target csv");
    std::string line;
    std::getline(in, line);  // schema comment
    std::getline(in, line);  // header
    hsssi::CfCurve target;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      double th, re, im, se, tre = 0, tim = 0, tse = 0;
      const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &th,
                                  &re, &im, &se, &tre, &tim, &tse);
      if (got >= 4) {
        target.theta.push_back(th);
        if (got >= 7) {
          target.value.push_back({tre, tim});
          target.se.push_back(tse);
        } else {
          target.value.push_back({re, im});
          target.se.push_back(se);
        }
      }
    }
    hsssi::CfQuery q;
    q.theta = target.theta;
    q.coeffs = req.value("coeffs", std::vector<double>{1.0});
    q.times = req.value("times", std::vector<double>{1.0});
    const auto rep = hsssi::ecf(samples, q);
    const auto cmp = hsssi::cf_compare(rep, target, req.value("k_sigma", 3.0),
                                       req.value("fit_scale", true),
                                       req.value("alpha", 1.5));
    json out;
    out["sup_distance"] = cmp.sup_distance;
    out["pass"] = cmp.pass;
    out["fitted_scale"] = cmp.fitted_scale;
    *result_json = dup_string(out.dump(2));
    return HSSSI_OK;
  });
}

hsssi_status hsssi_report_run_dir(const char* dir, char** report_json) {
  return guarded([&]() {
    if (!dir || !report_json) throw std::invalid_argument("null argument");
    *report_json = dup_string(hsssi::report_run_dir(dir));
    return HSSSI_OK;
  });
}

}  // extern "C"
