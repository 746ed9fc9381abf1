#pragma once

#include <memory>
#include <vector>

#include "core/rng.hpp"

namespace hsssi {

/// Chambers-Mallows-Stuck draw of a standard symmetric beta-stable variate,
/// characteristic function exp(-|theta|^beta).
double sample_stable_cms(double beta, Pcg64& rng);

/// Draw with characteristic function exp(-scale^beta |theta|^beta).
double sample_stable_increment(double beta, double scale, RngSpec rng);

/// Standard symmetric beta-stable law, beta in (1,2). Provides the density
/// and distribution function by Fourier inversion plus asymptotic tail
/// series, and a tabulated-quantile sampler used in the bulk path loops.
/// Instances are immutable after construction and safe to share.
class StableDist {
 public:
  explicit StableDist(double beta);

  double beta() const { return beta_; }

  /// Density at x (Fourier inversion below x_series_, 3-term series above).
  double pdf(double x) const;

  /// P(X <= x).
  double cdf(double x) const;

  /// Tail probability P(X > x) for x > 0; series form, accurate in the tail.
  double tail(double x) const;

  /// Density at 0: Gamma(1 + 1/beta) / pi.
  double pdf0() const { return pdf0_; }

  /// Fast exact-law sampler: tabulated quantiles in the bulk, rejection from
  /// a Pareto envelope against the tail series in the extreme tail. The bulk
  /// branch is inlined; it is the innermost call of every path loop.
  double sample(Pcg64& rng) const {
    const double u0 = rng.uniform();
    const double sign = u0 < 0.5 ? -1.0 : 1.0;
    const double v = u0 < 0.5 ? 1.0 - u0 : u0;
    if (v < u_hi_) {
      const double s = (v - u_lo_) / du_;
      const std::size_t i = static_cast<std::size_t>(s);
      const double t = s - static_cast<double>(i);
      const double omt = 1.0 - t;
      const double h00 = (1.0 + 2.0 * t) * omt * omt, h10 = t * omt * omt;
      const double h01 = t * t * (3.0 - 2.0 * t), h11 = t * t * (t - 1.0);
      return sign * (h00 * qx_[i] + h10 * du_ * qd_[i] + h01 * qx_[i + 1] +
                     h11 * du_ * qd_[i + 1]);
    }
    return sign * sample_upper(rng, v);
  }

  /// Shared per-beta cache; building a table is quadrature-heavy.
  static const StableDist& get(double beta);

 private:
  double pdf_series(double x) const;
  double tail_series(double x) const;
  double pdf_inversion(double x) const;
  double cdf_inversion(double x) const;
  double sample_tail(Pcg64& rng) const;
  double sample_upper(Pcg64& rng, double v) const;

  double beta_;
  double pdf0_;
  double x_series_;     // switch point between inversion and series
  double x_cut_;        // quantile table covers |x| <= x_cut_
  double u_cut_;        // F(x_cut_)
  double tail_c1_;      // leading tail constant: P(X>x) ~ tail_c1_ x^-beta

  // Quantile tables for u in [0.5, 0.98] (uniform in u) and
  // (0.98, u_cut_] (uniform in log(1-u)); Hermite-interpolated.
  std::vector<double> qx_, qd_;      // bulk: x(u), dx/du
  std::vector<double> tx_, td_;      // tail: x(w), dx/dw with w = log(1-u)
  double u_lo_ = 0.5, u_hi_ = 0.98, du_ = 0;
  double w_lo_ = 0, w_hi_ = 0, dw_ = 0;
};

}  // namespace hsssi
