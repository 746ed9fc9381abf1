#include "core/special.hpp"

#include <algorithm>
#include <cmath>

#include "core/quadrature.hpp"

namespace hsssi {

double cos_remainder(double u) {
  if (std::abs(u) < 0.7) {
    const double u2 = u * u;
    // u^4/24 - u^6/720 + u^8/40320 - u^10/3628800
    return u2 * u2 *
           (1.0 / 24.0 +
            u2 * (-1.0 / 720.0 + u2 * (1.0 / 40320.0 - u2 / 3628800.0)));
  }
  return 0.5 * u * u - (1.0 - std::cos(u));
}

double stable_trick_constant(double alpha) {
  // Symmetry kills the imaginary and compensator parts, leaving
  // 2 int_0^inf (1 - cos u) u^{-1-a} du. Near the origin split off the exact
  // power piece: (1 - cos u) = u^2/2 - r(u) with smooth r.
  QuadControl ctl;
  ctl.rel_tol = 1e-10;
  const double u0 = 0.5;
  double acc = std::pow(u0, 2.0 - alpha) / (2.0 - alpha);
  acc -= 2.0 *
         integrate([alpha](double u) { return cos_remainder(u) * std::pow(u, -1.0 - alpha); },
                   0.0, u0, ctl)
             .value;
  acc += integrate(
             [alpha](double u) {
               return 2.0 * (1.0 - std::cos(u)) * std::pow(u, -1.0 - alpha);
             },
             u0, 8.0 * M_PI, ctl)
             .value;
  acc += integrate_to_inf([alpha](double u) { return 2.0 * std::pow(u, -1.0 - alpha); },
                          8.0 * M_PI, ctl)
             .value;
  acc -= integrate_periodic_tail(
             [alpha](double u) { return 2.0 * std::cos(u) * std::pow(u, -1.0 - alpha); },
             8.0 * M_PI, 2.0 * M_PI, 1e-13)
             .value;
  return acc;
}

double stable_trick_constant_closed(double alpha) {
  return -2.0 * std::tgamma(-alpha) * std::cos(M_PI * alpha / 2.0);
}

double lepage_constant(double alpha) {
  return (1.0 - alpha) / (std::tgamma(2.0 - alpha) * std::cos(M_PI * alpha / 2.0));
}

double gaussian_abs_moment(double alpha) {
  return std::pow(2.0, alpha / 2.0) * std::tgamma((alpha + 1.0) / 2.0) /
         std::sqrt(M_PI);
}

double lepage_tail_weight(double alpha, int n_terms) {
  // E Gamma_k^{-s} = Gamma(k - s) / Gamma(k), s = 2/alpha in (1, 2).
  const double s = 2.0 / alpha;
  const int cap = std::max(200000, 50 * n_terms);
  double acc = 0.0;
  double term = std::exp(std::lgamma(n_terms + 1.0 - s) - std::lgamma(n_terms + 1.0));
  int k = n_terms + 1;
  for (; k < cap; ++k) {
    acc += term;
    term *= static_cast<double>(k - s) / static_cast<double>(k);
  }
  // Remaining terms behave like k^{-s}; integral tail with midpoint shift.
  acc += std::pow(static_cast<double>(k) - 0.5, 1.0 - s) / (s - 1.0);
  return acc;
}

}  // namespace hsssi
