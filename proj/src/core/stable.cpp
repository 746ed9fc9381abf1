#include "core/stable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "core/quadrature.hpp"

namespace hsssi {

double sample_stable_cms(double beta, Pcg64& rng) {
  const double u = rng.uniform(-M_PI_2, M_PI_2);
  const double w = rng.exponential();
  const double bu = beta * u;
  const double num = std::sin(bu) / std::pow(std::cos(u), 1.0 / beta);
  const double frac = std::cos(u - bu) / w;
  return num * std::pow(frac, (1.0 - beta) / beta);
}

double sample_stable_increment(double beta, double scale, RngSpec rng) {
  Pcg64 gen(rng);
  return scale * sample_stable_cms(beta, gen);
}

namespace {

// Integrals of cos(xz) e^{-z^beta} and sin(xz) e^{-z^beta}/z over [0, inf),
// split at the zeros of the oscillating factor so each panel is smooth.
double inversion_integral(double x, double beta, bool cosine) {
  const double zmax = std::pow(45.0, 1.0 / beta);  // e^{-z^beta} < 3e-20 past here
  const Integrand f = [x, beta, cosine](double z) {
    const double damp = std::exp(-std::pow(z, beta));
    if (cosine) return std::cos(x * z) * damp;
    return z == 0.0 ? x : std::sin(x * z) * damp / z;
  };
  QuadControl ctl;
  ctl.abs_tol = 1e-13;
  ctl.rel_tol = 1e-11;
  if (std::abs(x) * zmax < M_PI) {
    return integrate(f, 0.0, zmax, ctl).value;
  }
  const double step = M_PI / std::abs(x);
  double acc = 0.0;
  double lo = 0.0;
  while (lo < zmax) {
    const double hi = std::min(lo + step, zmax);
    acc += integrate(f, lo, hi, ctl).value;
    lo = hi;
  }
  return acc;
}

}  // namespace

StableDist::StableDist(double beta) : beta_(beta) {
  if (!(beta > 1.0 && beta < 2.0))
    throw std::invalid_argument("StableDist: beta must lie in (1,2)");
  pdf0_ = std::tgamma(1.0 + 1.0 / beta) / M_PI;
  x_series_ = 25.0;
  tail_c1_ = std::tgamma(beta) * std::sin(M_PI * beta / 2.0) / M_PI;

  // Table cut: keep ~1e-4 of each tail for the rejection sampler.
  const double q_tail = 1e-4;
  x_cut_ = std::pow(tail_c1_ / q_tail, 1.0 / beta);
  if (x_cut_ < x_series_ * 1.5) x_cut_ = x_series_ * 1.5;
  u_cut_ = 1.0 - tail_series(x_cut_);

  // Monotone CDF samples on a graded x grid, then quantile inversion.
  const int n_grid = 3000;
  std::vector<double> xs(n_grid), Fs(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    const double s = static_cast<double>(i) / (n_grid - 1);
    xs[i] = x_cut_ * (std::expm1(4.0 * s) / std::expm1(4.0));
    Fs[i] = cdf(xs[i]);
  }

  auto invert = [&](double u) {
    auto it = std::lower_bound(Fs.begin(), Fs.end(), u);
    std::size_t j = std::min<std::size_t>(
        Fs.size() - 1, std::max<std::size_t>(1, it - Fs.begin()));
    const double t = (u - Fs[j - 1]) / std::max(Fs[j] - Fs[j - 1], 1e-300);
    double x = xs[j - 1] + t * (xs[j] - xs[j - 1]);
    for (int k = 0; k < 3; ++k) {
      const double err = cdf(x) - u;
      const double d = pdf(x);
      if (d <= 0.0) break;
      x -= err / d;
    }
    return x;
  };

  // Sized so both tables stay comfortably inside L1 alongside the path state.
  const int nb = 1024, nt = 512;
  du_ = (u_hi_ - u_lo_) / nb;
  qx_.resize(nb + 1);
  qd_.resize(nb + 1);
  for (int i = 0; i <= nb; ++i) {
    const double u = u_lo_ + du_ * i;
    const double x = (i == 0) ? 0.0 : invert(u);
    qx_[i] = x;
    qd_[i] = 1.0 / std::max(pdf(x), 1e-300);
  }
  w_lo_ = std::log(1.0 - u_hi_);
  w_hi_ = std::log(1.0 - u_cut_);
  dw_ = (w_hi_ - w_lo_) / nt;
  tx_.resize(nt + 1);
  td_.resize(nt + 1);
  for (int i = 0; i <= nt; ++i) {
    const double w = w_lo_ + dw_ * i;
    const double u = 1.0 - std::exp(w);
    const double x = invert(u);
    tx_[i] = x;
    td_[i] = -std::exp(w) / std::max(pdf(x), 1e-300);  // dx/dw = -(1-u)/p(x)
  }
}

double StableDist::pdf_series(double x) const {
  // p(x) = (1/pi) sum_k (-1)^{k+1} Gamma(k b + 1)/k! sin(k pi b / 2) x^{-k b - 1}
  double acc = 0.0, sign = 1.0, kfac = 1.0;
  for (int k = 1; k <= 3; ++k) {
    kfac *= k;
    acc += sign * std::tgamma(k * beta_ + 1.0) / kfac *
           std::sin(k * M_PI * beta_ / 2.0) * std::pow(x, -k * beta_ - 1.0);
    sign = -sign;
  }
  return acc / M_PI;
}

double StableDist::tail_series(double x) const {
  double acc = 0.0, sign = 1.0, kfac = 1.0;
  for (int k = 1; k <= 3; ++k) {
    kfac *= k;
    acc += sign * std::tgamma(k * beta_) / kfac *
           std::sin(k * M_PI * beta_ / 2.0) * std::pow(x, -k * beta_);
    sign = -sign;
  }
  return acc / M_PI;
}

double StableDist::pdf_inversion(double x) const {
  return inversion_integral(x, beta_, true) / M_PI;
}

double StableDist::cdf_inversion(double x) const {
  return 0.5 + inversion_integral(x, beta_, false) / M_PI;
}

double StableDist::pdf(double x) const {
  x = std::abs(x);
  return x >= x_series_ ? pdf_series(x) : pdf_inversion(x);
}

double StableDist::tail(double x) const {
  if (x >= x_series_) return tail_series(x);
  return 1.0 - cdf_inversion(x);
}

double StableDist::cdf(double x) const {
  const double ax = std::abs(x);
  const double upper = ax >= x_series_ ? 1.0 - tail_series(ax) : cdf_inversion(ax);
  return x >= 0.0 ? upper : 1.0 - upper;
}

double StableDist::sample_tail(Pcg64& rng) const {
  // Pareto proposal x = x_cut * U^{-1/beta} against the series density.
  // The ratio p(x) / (beta c1 x^{-1-beta}) is 1 + O(x^{-beta}) and bounded by
  // its value at x_cut within the series' accuracy.
  const double env0 = beta_ * tail_c1_ * std::pow(x_cut_, -1.0 - beta_);
  const double m = 1.05 * pdf_series(x_cut_) / env0;
  for (int tries = 0; tries < 1000; ++tries) {
    const double x = x_cut_ * std::pow(rng.uniform_pos(), -1.0 / beta_);
    const double env = beta_ * tail_c1_ * std::pow(x, -1.0 - beta_);
    if (rng.uniform() * m * env <= pdf_series(x)) return x;
  }
  return x_cut_;  // unreachable in practice
}

double StableDist::sample_upper(Pcg64& rng, double v) const {
  if (v < u_cut_) {
    const double w = std::log(1.0 - v);
    const double s = (w - w_lo_) / dw_;
    std::size_t i = std::min<std::size_t>(tx_.size() - 2, static_cast<std::size_t>(s));
    const double t = s - static_cast<double>(i);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * tx_[i] + h10 * dw_ * td_[i] + h01 * tx_[i + 1] + h11 * dw_ * td_[i + 1];
  }
  return sample_tail(rng);
}

const StableDist& StableDist::get(double beta) {
  static std::mutex mu;
  static std::map<long long, std::unique_ptr<StableDist>> cache;
  const long long key = llround(beta * 1e12);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<StableDist>(beta)).first;
  }
  return *it->second;
}

}  // namespace hsssi
