#include "core/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "core/quadrature.hpp"
#include "core/special.hpp"
#include "core/stable.hpp"

namespace hsssi {

namespace {

/// Rejection sampler for magnitudes with density proportional to
/// f(x) x^{-1-index} on [cut, inf), f a slowly-varying preset. Proposal is a
/// Pareto with slightly lighter index so the ratio f(x) x^{-shift} stays
/// bounded; the envelope constant is scanned once on a log grid.
struct TailSampler {
  double index;
  double cut;
  const SlowlyVarying* f;
  double proposal_index;
  double envelope;

  TailSampler(double idx, double c, const SlowlyVarying& sv)
      : index(idx), cut(c), f(&sv) {
    proposal_index = idx - 0.1;
    const double shift = index - proposal_index;
    double m = 0.0;
    for (int k = 0; k <= 600; ++k) {
      const double x = cut * std::exp(0.1 * k);
      m = std::max(m, (*f)(x)*std::pow(x, -shift));
    }
    envelope = 1.0001 * m;
  }

  double operator()(Pcg64& rng) const {
    const double shift = index - proposal_index;
    for (int tries = 0; tries < 10000; ++tries) {
      const double x = cut * std::pow(rng.uniform_pos(), -1.0 / proposal_index);
      const double ratio = (*f)(x)*std::pow(x, -shift) / envelope;
      if (rng.uniform() <= ratio) return x;
    }
    return cut;
  }
};

}  // namespace

PathGrid simulate_path(const LevyModel& model, double horizon, double dt, RngSpec rng) {
  if (!(dt > 0.0) || dt > horizon)
    throw std::invalid_argument("simulate_path: need 0 < dt <= horizon");
  const std::size_t n = static_cast<std::size_t>(std::floor(horizon / dt)) + 1;
  PathGrid path;
  path.dt = dt;
  path.horizon = horizon;
  path.values.resize(n);
  path.values[0] = 0.0;
  Pcg64 gen(rng);
  const double beta = model.beta();

  if (model.is_pure_stable()) {
    const StableDist& dist = StableDist::get(beta);
    const double scale = std::pow(dt, 1.0 / beta);
    double pos = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      pos += scale * dist.sample(gen);
      path.values[k] = pos;
    }
    return path;
  }

  // RV-density scheme: threshold at the one-step displacement scale.
  const SlowlyVarying& f = model.slowly_varying();
  const double delta = std::pow(dt, 1.0 / beta);
  QuadControl ctl;
  const double jump_rate =
      2.0 / model.c_beta() *
      integrate_to_inf([&](double x) { return f(x) * std::pow(x, -1.0 - beta); }, delta,
                       ctl)
          .value;
  // Small-jump exponent at theta=1: (2/c(b)) int_0^delta (1-cos x) f(x) x^{-1-b} dx,
  // with the power part split off exactly (see model.cpp).
  const double q = 2.0 / (2.0 - beta);
  double small_exp =
      integrate([&](double w) {
        const double x = std::pow(w, q);
        return 0.5 * f(x) * q * std::pow(w, q * (2.0 - beta) - 1.0);
      }, 0.0, std::pow(delta, 1.0 / q), ctl)
          .value;
  small_exp -= integrate([&](double x) {
                 return cos_remainder(x) * f(x) * std::pow(x, -1.0 - beta);
               }, 0.0, std::min(delta, 4.0), ctl)
                   .value;
  if (delta > 4.0)
    small_exp += integrate([&](double x) {
                   return (1.0 - std::cos(x) - 0.5 * x * x) * f(x) *
                          std::pow(x, -1.0 - beta);
                 }, 4.0, delta, ctl)
                     .value;
  small_exp *= 2.0 / model.c_beta();

  const StableDist& dist = StableDist::get(beta);
  const double small_scale = std::pow(dt * small_exp, 1.0 / beta);
  const TailSampler jumps(beta, delta, f);
  const double mean_jumps = dt * jump_rate;
  double pos = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    double inc = small_scale * dist.sample(gen);
    const std::uint64_t m = gen.poisson(mean_jumps);
    for (std::uint64_t j = 0; j < m; ++j) {
      const double mag = jumps(gen);
      inc += gen.uniform() < 0.5 ? -mag : mag;
    }
    pos += inc;
    path.values[k] = pos;
  }
  return path;
}

double particle_intensity(const ModelParams& params, const SlowlyVarying& weight_L) {
  const double a = params.alpha, eps = params.epsilon_cut;
  if (weight_L.preset() == SlowlyVarying::Preset::Constant) {
    return 2.0 * weight_L.constant_value() * std::pow(eps, -a) / a;
  }
  QuadControl ctl;
  auto r = integrate_to_inf(
      [&](double z) { return weight_L(z) * std::pow(z, -1.0 - a); }, eps, ctl);
  if (!r.converged) throw std::runtime_error("particle_intensity: divergent weight law");
  return 2.0 * r.value;
}

double sample_weight_magnitude(double alpha, double eps, const SlowlyVarying& weight_L,
                               Pcg64& rng) {
  if (weight_L.preset() == SlowlyVarying::Preset::Constant) {
    return eps * std::pow(rng.uniform_pos(), -1.0 / alpha);
  }
  static thread_local std::unique_ptr<TailSampler> sampler;
  static thread_local SlowlyVarying cached_sv = SlowlyVarying::constant();
  static thread_local double cached_alpha = 0, cached_eps = 0;
  if (!sampler || cached_sv.preset() != weight_L.preset() ||
      cached_sv.constant_value() != weight_L.constant_value() ||
      cached_alpha != alpha || cached_eps != eps) {
    cached_sv = weight_L;
    sampler = std::make_unique<TailSampler>(alpha, eps, cached_sv);
    cached_alpha = alpha;
    cached_eps = eps;
  }
  return (*sampler)(rng);
}

ParticleField sample_particle_field(const ModelParams& params,
                                    const SlowlyVarying& weight_L, double window_lo,
                                    double window_hi, RngSpec rng) {
  if (!(window_lo < window_hi))
    throw std::invalid_argument("sample_particle_field: empty window");
  ParticleField field;
  field.window_lo = window_lo;
  field.window_hi = window_hi;
  Pcg64 gen(rng);
  const double mean = (window_hi - window_lo) * particle_intensity(params, weight_L);
  const std::uint64_t count = gen.poisson(mean);
  field.positions.resize(count);
  field.weights.resize(count);
  for (std::uint64_t j = 0; j < count; ++j) {
    field.positions[j] = gen.uniform(window_lo, window_hi);
    const double mag = sample_weight_magnitude(params.alpha, params.epsilon_cut,
                                               weight_L, gen);
    field.weights[j] = gen.uniform() < 0.5 ? -mag : mag;
  }
  return field;
}

void write_path_dump(const PathGrid& path, const std::string& file) {
  std::FILE* fp = std::fopen(file.c_str(), "wb");
  if (!fp) throw std::runtime_error("write_path_dump: cannot open " + file);
  const std::uint64_t count = path.values.size();
  bool ok = std::fwrite(&path.dt, sizeof(double), 1, fp) == 1;
  ok = ok && std::fwrite(&path.horizon, sizeof(double), 1, fp) == 1;
  ok = ok && std::fwrite(&count, sizeof(count), 1, fp) == 1;
  ok = ok && std::fwrite(path.values.data(), sizeof(double), count, fp) == count;
  std::fclose(fp);
  if (!ok) throw std::runtime_error("write_path_dump: short write to " + file);
}

PathGrid read_path_dump(const std::string& file) {
  std::FILE* fp = std::fopen(file.c_str(), "rb");
  if (!fp) throw std::runtime_error("read_path_dump: cannot open " + file);
  PathGrid path;
  std::uint64_t count = 0;
  bool ok = std::fread(&path.dt, sizeof(double), 1, fp) == 1;
  ok = ok && std::fread(&path.horizon, sizeof(double), 1, fp) == 1;
  ok = ok && std::fread(&count, sizeof(count), 1, fp) == 1;
  if (ok) {
    path.values.resize(count);
    ok = std::fread(path.values.data(), sizeof(double), count, fp) == count;
  }
  std::fclose(fp);
  if (!ok) throw std::runtime_error("read_path_dump: truncated file " + file);
  return path;
}

}  // namespace hsssi
