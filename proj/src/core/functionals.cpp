#include "core/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "core/parallel.hpp"
#include "core/sampling.hpp"
#include "core/stable.hpp"

namespace hsssi {

double StepPolicy::dt_fine(const TestFunctionPhi& phi, double beta) const {
  if (dt_fine_override > 0.0) return dt_fine_override;
  return std::pow(fine_frac * phi.feature_scale(), beta);
}

namespace {

/// Precomputed step sizes per power-of-two gap class; rounding the gap down
/// to its class base keeps the stretched steps conservative. Building the
/// table costs a few dozen pow calls, hot steps cost one ilogb.
struct StepTable {
  static constexpr int kMinExp = -24;
  static constexpr int kMaxExp = 24;
  double dt[kMaxExp - kMinExp + 1];
  double scale[kMaxExp - kMinExp + 1];
  double dt_fine = 0.0, fine_scale = 0.0;
  double dt_max = 0.0, max_scale = 0.0;
  double hull_lo = 0.0, hull_hi = 0.0;

  StepTable(double beta, const TestFunctionPhi& phi, const StepPolicy& policy,
            double horizon) {
    dt_fine = policy.dt_fine(phi, beta);
    fine_scale = std::pow(dt_fine, 1.0 / beta);
    dt_max = std::max(dt_fine, policy.dt_max_frac * horizon);
    max_scale = std::pow(dt_max, 1.0 / beta);
    const double margin = policy.margin_steps * policy.fine_frac * phi.feature_scale();
    const auto& features = phi.feature_points();
    hull_lo = features.front();
    hull_hi = features.front();
    for (double fpt : features) {
      hull_lo = std::min(hull_lo, fpt);
      hull_hi = std::max(hull_hi, fpt);
    }
    hull_lo -= margin;
    hull_hi += margin;
    for (int e = kMinExp; e <= kMaxExp; ++e) {
      const double gap = std::ldexp(1.0, e);
      double d = std::pow(policy.far_factor * gap, beta);
      d = std::min(std::max(d, dt_fine), dt_max);
      dt[e - kMinExp] = d;
      scale[e - kMinExp] = std::pow(d, 1.0 / beta);
    }
  }

  void lookup(double gap, double* d, double* s) const {
    int e = std::ilogb(gap);
    if (e < kMinExp) {
      *d = dt_fine;
      *s = fine_scale;
      return;
    }
    if (e > kMaxExp) {
      *d = dt_max;
      *s = max_scale;
      return;
    }
    *d = dt[e - kMinExp];
    *s = scale[e - kMinExp];
  }
};

/// Occupation integrals of phi(offset + eta_u) along one exactly-sampled
/// stable path, observed at the sorted breakpoints. Steps refine near the
/// phi features and stretch with the distance to them; increments over any
/// step length are exact in law, so the only error is the frozen-integrand
/// Riemann rule.
void occupation_course(double beta, const TestFunctionPhi& phi, double offset,
                       const std::vector<double>& breaks, const StepTable& table,
                       Pcg64& rng, double* out) {
  const StableDist& dist = StableDist::get(beta);
  double u = 0.0;
  double pos = offset;
  double acc = 0.0;
  std::size_t next_break = 0;
  const std::size_t nb = breaks.size();
  while (next_break < nb) {
    double dt, scale;
    if (pos >= table.hull_lo && pos <= table.hull_hi) {
      dt = table.dt_fine;
      scale = table.fine_scale;
    } else {
      const double gap = pos < table.hull_lo ? table.hull_lo - pos : pos - table.hull_hi;
      table.lookup(gap, &dt, &scale);
    }
    const double val = phi(pos);
    double remaining = dt;
    while (next_break < nb && u + remaining >= breaks[next_break] - 1e-12) {
      const double head = breaks[next_break] - u;
      acc += val * head;
      remaining -= head;
      u = breaks[next_break];
      out[next_break] = acc;
      ++next_break;
    }
    if (next_break >= nb) break;
    acc += val * remaining;
    u += remaining;
    pos += scale * dist.sample(rng);
  }
}

/// Uniform-step fallback for rv-density motions, where per-step jump
/// thresholds depend on the step length.
void occupation_course_uniform(const LevyModel& model, const TestFunctionPhi& phi,
                               double offset, const std::vector<double>& breaks,
                               double dt, RngSpec rng, double* out) {
  PathGrid path = simulate_path(model, breaks.back() + dt, dt, rng);
  double acc = 0.0;
  std::size_t next_break = 0;
  const std::size_t nb = breaks.size();
  double u = 0.0;
  for (std::size_t k = 0; k < path.values.size() && next_break < nb; ++k) {
    const double val = phi(offset + path.values[k]);
    double remaining = dt;
    while (next_break < nb && u + remaining >= breaks[next_break] - 1e-12) {
      const double head = breaks[next_break] - u;
      acc += val * head;
      remaining -= head;
      u = breaks[next_break];
      out[next_break] = acc;
      ++next_break;
    }
    acc += val * remaining;
    u += remaining;
  }
}

std::vector<double> scaled_breaks(const std::vector<double>& times, double factor) {
  std::vector<double> b(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) b[i] = times[i] * factor;
  if (!std::is_sorted(b.begin(), b.end()))
    throw std::invalid_argument("observation times must be sorted");
  return b;
}

}  // namespace

FunctionalSample prop1_sample(const LevyModel& model, const TestFunctionPhi& phi,
                              double T, double x, const std::vector<double>& times,
                              RngSpec rng, const StepPolicy& policy) {
  const double beta = model.beta();
  const double root = std::pow(T, 1.0 / beta);
  const double f_at_root = model.slowly_varying()(root);
  const double d_T = model.is_pure_stable() ? T : T / f_at_root;
  const double f_T = std::pow(T, 1.0 - 1.0 / beta) /
                     (model.is_pure_stable() ? 1.0 : f_at_root);
  const auto breaks = scaled_breaks(times, d_T);
  FunctionalSample s;
  s.times = times;
  s.T = T;
  s.replica = rng.stream_id;
  s.values.resize(times.size());
  const double offset = -root * x;
  if (model.is_pure_stable()) {
    Pcg64 gen(rng);
    const StepTable table(beta, phi, policy, breaks.back());
    occupation_course(beta, phi, offset, breaks, table, gen, s.values.data());
  } else {
    occupation_course_uniform(model, phi, offset, breaks, policy.dt_fine(phi, beta),
                              rng, s.values.data());
  }
  for (auto& v : s.values) v /= f_T;
  return s;
}

FunctionalSample rosen_sample(double beta, const TestFunctionPhi& phi, double T,
                              const std::vector<double>& times, RngSpec rng,
                              const StepPolicy& policy) {
  if (phi.integral() != 0.0)
    throw std::invalid_argument("rosen_sample requires integral(phi) = 0");
  const auto breaks = scaled_breaks(times, T);
  FunctionalSample s;
  s.times = times;
  s.T = T;
  s.replica = rng.stream_id;
  s.values.resize(times.size());
  Pcg64 gen(rng);
  const StepTable table(beta, phi, policy, breaks.back());
  occupation_course(beta, phi, 0.0, breaks, table, gen, s.values.data());
  const double norm = std::sqrt(std::pow(T, 1.0 - 1.0 / beta));
  for (auto& v : s.values) v /= norm;
  return s;
}

ParticleFunctionalResult particle_functional_sample(
    const LimitSpec& spec, const LevyModel& model, const SlowlyVarying& weight_L,
    const TestFunctionPhi& phi, double T, const std::vector<double>& times,
    const WindowPolicy& window, RngSpec rng, const StepPolicy& policy) {
  const double beta = spec.params.beta;
  const bool heavy = spec.family == LimitFamily::HeavySymmetric ||
                     spec.family == LimitFamily::HeavyAsymmetric;
  const SlowlyVarying g1 =
      heavy && phi.kind() == TestFunctionPhi::Kind::HeavyTailPair
          ? phi.g1_sv()
          : SlowlyVarying::constant();
  const Normalization nrm =
      normalization(spec.family, T, spec.params, model.slowly_varying(), weight_L, g1,
                    spec.gamma_min());
  const auto breaks = scaled_breaks(times, nrm.D_T);
  const double x_eff_max = window.half_width_factor * std::pow(nrm.D_T, 1.0 / beta);
  const double x_max = x_eff_max / nrm.C_T;

  ParticleField field = sample_particle_field(spec.params, weight_L, -x_max, x_max,
                                              child_stream(rng, 0));
  ParticleFunctionalResult out;
  out.sample.times = times;
  out.sample.T = T;
  out.sample.replica = rng.stream_id;
  out.sample.values.assign(times.size(), 0.0);
  out.particle_count = field.positions.size();

  std::vector<double> per_break(times.size());
  const StepTable table(beta, phi, policy, breaks.back());
  for (std::size_t j = 0; j < field.positions.size(); ++j) {
    const double z = field.weights[j];
    if (std::abs(z) <= spec.params.epsilon_cut) continue;
    const double offset = nrm.C_T * field.positions[j];
    Pcg64 gen(child_stream(rng, j + 1));
    occupation_course(beta, phi, offset, breaks, table, gen, per_break.data());
    for (std::size_t i = 0; i < times.size(); ++i)
      out.sample.values[i] += z * per_break[i];
  }
  for (auto& v : out.sample.values) v /= nrm.scale;

  // Tail estimate of the mass ignored beyond the window, in the diffusive
  // frame: both tails of E L_t integrate to ~ c_p t^2 K^{-beta} / beta
  // against a total occupation mass of t.
  const double c_p = std::tgamma(beta + 1.0) * std::sin(M_PI * beta / 2.0) / M_PI;
  const double t_max = times.back();
  out.truncation_estimate =
      c_p * t_max * std::pow(window.half_width_factor, -beta) / beta;
  out.truncation_warning = out.truncation_estimate > window.truncation_tolerance;
  return out;
}

std::vector<FunctionalSample> run_prop1_replicas(const LevyModel& model,
                                                 const TestFunctionPhi& phi, double T,
                                                 double x, const std::vector<double>& times,
                                                 std::size_t replicas, RngSpec base,
                                                 const StepPolicy& policy) {
  std::vector<FunctionalSample> out(replicas);
  parallel_for_indexed(replicas, [&](std::size_t r) {
    out[r] = prop1_sample(model, phi, T, x, times,
                          RngSpec{base.seed, base.stream_id + r}, policy);
  });
  return out;
}

std::vector<FunctionalSample> run_rosen_replicas(double beta, const TestFunctionPhi& phi,
                                                 double T, const std::vector<double>& times,
                                                 std::size_t replicas, RngSpec base,
                                                 const StepPolicy& policy) {
  std::vector<FunctionalSample> out(replicas);
  parallel_for_indexed(replicas, [&](std::size_t r) {
    out[r] = rosen_sample(beta, phi, T, times, RngSpec{base.seed, base.stream_id + r},
                          policy);
  });
  return out;
}

std::vector<FunctionalSample> run_particle_replicas(
    const LimitSpec& spec, const LevyModel& model, const SlowlyVarying& weight_L,
    const TestFunctionPhi& phi, double T, const std::vector<double>& times,
    const WindowPolicy& window, std::size_t replicas, RngSpec base,
    const StepPolicy& policy) {
  std::vector<FunctionalSample> out(replicas);
  parallel_for_indexed(replicas, [&](std::size_t r) {
    out[r] = particle_functional_sample(spec, model, weight_L, phi, T, times, window,
                                        RngSpec{base.seed, base.stream_id + r}, policy)
                 .sample;
  });
  return out;
}

void write_samples_jsonl(const std::vector<FunctionalSample>& samples,
                         const std::string& regime, std::uint64_t seed,
                         const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_samples_jsonl: cannot open " + file);
  out.precision(17);
  for (const auto& s : samples) {
    nlohmann::json rec;
    rec["regime"] = regime;
    rec["T"] = s.T;
    rec["seed"] = seed;
    rec["stream"] = s.replica;
    rec["times"] = s.times;
    rec["values"] = s.values;
    out << rec.dump() << '\n';
  }
}

std::vector<FunctionalSample> read_samples_jsonl(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("read_samples_jsonl: cannot open " + file);
  std::vector<FunctionalSample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line);
    FunctionalSample s;
    s.T = rec.at("T").get<double>();
    s.replica = rec.at("stream").get<std::uint64_t>();
    s.times = rec.at("times").get<std::vector<double>>();
    s.values = rec.at("values").get<std::vector<double>>();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace hsssi
