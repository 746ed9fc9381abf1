#include "core/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/parallel.hpp"
#include "core/sampling.hpp"
#include "core/special.hpp"
#include "core/stable.hpp"

namespace hsssi {

namespace {

std::vector<double> union_times(const std::vector<InnerQuery>& queries) {
  std::vector<double> all;
  for (const auto& q : queries)
    all.insert(all.end(), q.times.begin(), q.times.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            all.end());
  return all;
}

std::size_t time_index(const std::vector<double>& ts, double t) {
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) < 1e-12) return i;
  throw std::logic_error("time not in union grid");
}

/// Singular part int_0^{k0 dx} y^{-gamma} D(y) dy with D linearly
/// interpolated between the grid nodes and D(0) = 0 by construction.
double singular_part(const double* D, double gamma, double dx, int k0) {
  double acc = 0.0;
  const double g1 = 1.0 - gamma, g2 = 2.0 - gamma;
  for (int m = 0; m < k0; ++m) {
    const double a = m * dx, b = (m + 1) * dx;
    const double d0 = m == 0 ? 0.0 : D[m];
    const double slope = (D[m + 1] - d0) / dx;
    const double i1 = (std::pow(b, g2) - std::pow(a, g2)) / g2;
    if (m == 0) {
      acc += slope * i1;
      continue;
    }
    const double i0 = (std::pow(a, g1) - std::pow(b, g1)) / (gamma - 1.0);
    acc += (d0 - slope * a) * i0 + slope * i1;
  }
  return acc;
}

}  // namespace

HeavyKernel::HeavyKernel(double gamma, double dx, int n, bool asymmetric)
    : gamma_(gamma), dx_(dx), asym_(asymmetric), k0_(10) {
  const double g1 = 1.0 - gamma;
  w_.assign(n, 0.0);
  for (int k = k0_; k < n; ++k) {
    const double lo = (k == k0_ ? k0_ : k - 0.5) * dx;
    const double hi = (k + 0.5) * dx;
    w_[k] = (std::pow(lo, g1) - std::pow(hi, g1)) / (gamma - 1.0);
  }
  w_inf_ = std::pow(k0_ * dx, g1) / (gamma - 1.0);
}

void HeavyKernel::eval_row(const double* L, int n, const std::vector<int>& xs,
                           double* out) const {
  std::vector<double> D(k0_ + 1);
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    const int kx = xs[xi];
    for (int m = 0; m <= k0_; ++m) {
      const double up = kx + m < n ? L[kx + m] : 0.0;
      if (asym_) {
        D[m] = up - L[kx];
      } else {
        const double dn = kx - m >= 0 ? L[kx - m] : 0.0;
        D[m] = up - dn;
      }
    }
    double acc = singular_part(D.data(), gamma_, dx_, k0_);
    const int k_hi = n - 1 - kx;
    double s = 0.0;
    for (int k = k0_; k <= k_hi; ++k) s += w_[k] * L[kx + k];
    if (asym_) {
      acc += s - L[kx] * w_inf_;
    } else {
      const int k_lo = kx;
      double s2 = 0.0;
      for (int k = k0_; k <= k_lo; ++k) s2 += w_[k] * L[kx - k];
      acc += s - s2;
    }
    out[xi] = acc;
  }
}

std::vector<InnerResult> inner_alpha_integrals(LimitKernel kernel, double alpha,
                                               double beta, double gamma1,
                                               double gamma2,
                                               const std::vector<InnerQuery>& queries,
                                               const FieldPoolConfig& pool,
                                               std::vector<double>* per_field_out) {
  if (queries.empty()) return {};
  const auto uts = union_times(queries);
  const double horizon = uts.back();
  const int n = 2 * static_cast<int>(std::round(pool.grid_half_width / pool.dx)) + 1;
  const double x0 = -pool.dx * ((n - 1) / 2);
  const double h = 0.5 * pool.dx;

  // Outer-integral subgrid: step about 0.08 keeps the trapezoid cheap while
  // the heavy kernels still read the full-resolution field.
  const int stride = std::max(1, static_cast<int>(std::round(0.08 / pool.dx)));
  std::vector<int> xs;
  for (int k = 0; k < n; k += stride) {
    if (std::abs(x0 + k * pool.dx) <= pool.integral_half_width + 1e-12) xs.push_back(k);
  }
  const double dxs = pool.dx * stride;

  // Precompute query time indices into the union grid.
  std::vector<std::vector<std::size_t>> q_idx(queries.size());
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    for (double t : queries[qi].times)
      q_idx[qi].push_back(time_index(uts, t));
    if (queries[qi].coeffs.size() != queries[qi].times.size())
      throw std::invalid_argument("inner query needs matching coeffs/times");
  }

  const bool heavy = kernel == LimitKernel::HeavySymmetric ||
                     kernel == LimitKernel::HeavyAsymmetric;
  const bool asym = kernel == LimitKernel::HeavyAsymmetric;
  const double gamma = asym ? std::min(gamma1, gamma2) : gamma1;
  const HeavyKernel kw = heavy ? HeavyKernel(gamma, pool.dx, n, asym)
                               : HeavyKernel(1.5, pool.dx, 1, false);

  const auto model = LevyModel::pure_stable(beta);
  std::vector<double> per_field(pool.n_fields * queries.size());

  parallel_for_indexed(pool.n_fields, [&](std::size_t fi) {
    const RngSpec fspec{pool.rng.seed, pool.rng.stream_id + fi};
    PathGrid path = simulate_path(model, horizon, pool.dt, fspec);
    LocalTimeField field = estimate_local_time(path, x0, pool.dx, n, h, uts);

    // Kernel values per union time and subgrid point.
    std::vector<double> K(uts.size() * xs.size());
    if (kernel == LimitKernel::LocalTime) {
      for (std::size_t ti = 0; ti < uts.size(); ++ti)
        for (std::size_t xi = 0; xi < xs.size(); ++xi)
          K[ti * xs.size() + xi] = field.value(ti, xs[xi]);
    } else if (heavy) {
      for (std::size_t ti = 0; ti < uts.size(); ++ti)
        kw.eval_row(field.table.data() + ti * n, n, xs, K.data() + ti * xs.size());
    }

    if (kernel == LimitKernel::BrownianTimeChange) {
      // One Brownian path per (x, replicate), evaluated at the increasing
      // local-time values; replicates shared across queries.
      Pcg64 wgen(child_stream(fspec, 0x5754));
      std::vector<double> acc_q(queries.size(), 0.0);
      std::vector<double> W(uts.size());
      for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        const double weight =
            (xi == 0 || xi + 1 == xs.size()) ? 0.5 * dxs : dxs;
        std::vector<double> mean_q(queries.size(), 0.0);
        for (int rep = 0; rep < pool.w_replicates; ++rep) {
          double prev_l = 0.0, w_acc = 0.0;
          for (std::size_t ti = 0; ti < uts.size(); ++ti) {
            const double l = field.value(ti, xs[xi]);
            const double inc = l - prev_l;
            prev_l = l;
            w_acc += std::sqrt(std::max(inc, 0.0)) * wgen.normal();
            W[ti] = w_acc;
          }
          for (std::size_t qi = 0; qi < queries.size(); ++qi) {
            double s = 0.0;
            for (std::size_t j = 0; j < q_idx[qi].size(); ++j)
              s += queries[qi].coeffs[j] * W[q_idx[qi][j]];
            mean_q[qi] += std::pow(std::abs(s), alpha);
          }
        }
        for (std::size_t qi = 0; qi < queries.size(); ++qi)
          acc_q[qi] += weight * mean_q[qi] / pool.w_replicates;
      }
      for (std::size_t qi = 0; qi < queries.size(); ++qi)
        per_field[fi * queries.size() + qi] = acc_q[qi];
      return;
    }

    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      double acc = 0.0;
      for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        double s = 0.0;
        for (std::size_t j = 0; j < q_idx[qi].size(); ++j)
          s += queries[qi].coeffs[j] * K[q_idx[qi][j] * xs.size() + xi];
        const double weight =
            (xi == 0 || xi + 1 == xs.size()) ? 0.5 * dxs : dxs;
        acc += weight * std::pow(std::abs(s), alpha);
      }
      per_field[fi * queries.size() + qi] = acc;
    }
  });

  std::vector<InnerResult> out(queries.size());
  std::vector<double> col(pool.n_fields);
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    for (std::size_t fi = 0; fi < pool.n_fields; ++fi)
      col[fi] = per_field[fi * queries.size() + qi];
    const double mean = pairwise_sum(col) / pool.n_fields;
    double var = 0.0;
    for (double c : col) var += (c - mean) * (c - mean);
    var /= pool.n_fields > 1 ? (pool.n_fields - 1) : 1;
    out[qi].J = mean;
    out[qi].se = std::sqrt(var / pool.n_fields);
  }
  if (per_field_out) *per_field_out = std::move(per_field);
  return out;
}

CfCurve cf_from_inner(const std::vector<double>& theta, double alpha, double kappa,
                      const InnerResult& inner) {
  CfCurve curve;
  curve.theta = theta;
  curve.inner_J = inner.J;
  curve.inner_se = inner.se;
  const double c_a = stable_trick_constant(alpha);
  curve.value.resize(theta.size());
  curve.se.resize(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double rate = c_a * std::pow(std::abs(theta[i] * kappa), alpha);
    const double phi = std::exp(-rate * inner.J);
    curve.value[i] = {phi, 0.0};
    curve.se[i] = phi * rate * inner.se;
  }
  return curve;
}

CfCurve cf_first_order(const CfQuery& q, double alpha, double beta, double int_phi,
                       const FieldPoolConfig& pool) {
  if (int_phi == 0.0)
    throw std::invalid_argument("cf_first_order requires integral(phi) != 0");
  const auto inner = inner_alpha_integrals(LimitKernel::LocalTime, alpha, beta, 0, 0,
                                           {{q.coeffs, q.times}}, pool);
  return cf_from_inner(q.theta, alpha, int_phi, inner[0]);
}

CfCurve cf_second_order(const CfQuery& q, double alpha, double beta, double c_phi_value,
                        const FieldPoolConfig& pool) {
  const auto inner = inner_alpha_integrals(LimitKernel::BrownianTimeChange, alpha, beta,
                                           0, 0, {{q.coeffs, q.times}}, pool);
  return cf_from_inner(q.theta, alpha, c_phi_value, inner[0]);
}

CfCurve cf_heavy(const CfQuery& q, double alpha, double beta, double gamma1,
                 double gamma2, bool asymmetric, const FieldPoolConfig& pool) {
  const auto inner = inner_alpha_integrals(
      asymmetric ? LimitKernel::HeavyAsymmetric : LimitKernel::HeavySymmetric, alpha,
      beta, gamma1, gamma2, {{q.coeffs, q.times}}, pool);
  return cf_from_inner(q.theta, alpha, 1.0, inner[0]);
}

std::vector<double> kernel_Z(const LocalTimeField& field, double gamma, double x,
                             bool asymmetric) {
  if (field.dx > 0.05 + 1e-12)
    throw std::invalid_argument(
        "kernel_Z: field grid too coarse near x, need dx <= 0.05");
  const int kx = static_cast<int>(std::round((x - field.x0) / field.dx));
  if (kx < 0 || kx >= field.n ||
      std::abs(field.x0 + kx * field.dx - x) > 1e-6 * field.dx)
    throw std::invalid_argument("kernel_Z: x must lie on the field grid");
  const HeavyKernel kw(gamma, field.dx, field.n, asymmetric);
  std::vector<double> out(field.times.size());
  const std::vector<int> xs{kx};
  for (std::size_t ti = 0; ti < field.times.size(); ++ti) {
    kw.eval_row(field.table.data() + ti * field.n, field.n, xs, &out[ti]);
  }
  return out;
}

FunctionalSample lepage_sample(const LimitSpec& spec, const std::vector<double>& times,
                               const LePageOptions& options, RngSpec rng) {
  if (options.n_terms < 100)
    throw std::invalid_argument("lepage_sample: need at least 100 terms");
  const double alpha = spec.params.alpha;
  const double beta = spec.params.beta;
  const double X = options.window_half_width;
  // Series scale: the bare series sum eps_j Gamma_j^{-1/a} v_j is SaS with
  // sigma^a = C_a^{-1} E|v|^a, so matching exp(-c(a) 2X E|K|^a |theta|^a)
  // needs the multiplier (c(a) 2X C_a)^{1/a}.
  const double c_a = stable_trick_constant(alpha);
  const double scale =
      std::pow(c_a * 2.0 * X * lepage_constant(alpha), 1.0 / alpha) * options.kappa;

  FunctionalSample s;
  s.times = times;
  s.T = 0.0;
  s.replica = rng.stream_id;
  s.values.assign(times.size(), 0.0);
  if (options.kappa == 0.0) return s;

  const double horizon = times.back();
  const double grid_half = X + 8.0;
  const int n = 2 * static_cast<int>(std::round(grid_half / options.dx)) + 1;
  const double x0 = -options.dx * ((n - 1) / 2);
  const auto model = LevyModel::pure_stable(beta);
  const bool heavy = spec.family == LimitFamily::HeavySymmetric ||
                     spec.family == LimitFamily::HeavyAsymmetric;

  Pcg64 master(rng);
  double gamma_arrival = 0.0;
  std::vector<double> sq_kernel(times.size(), 0.0);
  for (std::size_t i = 0; i < options.n_terms; ++i) {
    gamma_arrival += master.exponential();
    const double sign = master.uniform() < 0.5 ? -1.0 : 1.0;
    const double xi = master.uniform(-X, X);
    const RngSpec term_rng = child_stream(rng, i + 1);
    PathGrid path = simulate_path(model, horizon, options.dt, term_rng);

    std::vector<double> K(times.size());
    if (!heavy) {
      const int kx = static_cast<int>(std::round((xi - x0) / options.dx));
      LocalTimeField f1 = estimate_local_time(path, x0 + kx * options.dx, options.dx, 1,
                                              0.5 * options.dx, times);
      for (std::size_t ti = 0; ti < times.size(); ++ti) K[ti] = f1.value(ti, 0);
      if (spec.family == LimitFamily::SecondOrder) {
        Pcg64 wgen(child_stream(rng, i + 1, 0x57));
        double prev = 0.0, w_acc = 0.0;
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
          const double inc = K[ti] - prev;
          prev = K[ti];
          w_acc += std::sqrt(std::max(inc, 0.0)) * wgen.normal();
          K[ti] = w_acc;
        }
      }
    } else {
      LocalTimeField field = estimate_local_time(path, x0, options.dx, n,
                                                 0.5 * options.dx, times);
      const int kx = static_cast<int>(std::round((xi - x0) / options.dx));
      K = kernel_Z(field, spec.gamma_min(), x0 + kx * options.dx,
                   spec.family == LimitFamily::HeavyAsymmetric);
    }

    const double g_pow = std::pow(gamma_arrival, -1.0 / alpha);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      s.values[ti] += scale * sign * g_pow * K[ti];
      sq_kernel[ti] += K[ti] * K[ti];
    }
  }

  if (options.gaussian_completion) {
    // Remaining-series variance: scale^2 E[K_t^2] sum_{i>N} E Gamma_i^{-2/a},
    // with E[K_t^2] estimated per observation time from the drawn kernels.
    // One shared draw keeps the completion comonotone across times, matching
    // the strong correlation of the true truncated tails.
    const double tail_w = lepage_tail_weight(alpha, static_cast<int>(options.n_terms));
    Pcg64 gtail(child_stream(rng, 0, 0xC0));
    const double g = gtail.normal();
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      const double vt = sq_kernel[ti] / options.n_terms * tail_w;
      s.values[ti] += scale * std::sqrt(std::max(vt, 0.0)) * g;
    }
  }
  return s;
}

}  // namespace hsssi
