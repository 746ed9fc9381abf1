#pragma once

#include <cstddef>
#include <functional>

namespace hsssi {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

struct QuadControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 48;
  std::size_t max_evaluations = 4'000'000;
};

using Integrand = std::function<double(double)>;

/// Adaptive bisection on [a, b] with a Gauss7/Kronrod15 pair per segment.
QuadResult integrate(const Integrand& f, double a, double b, QuadControl ctl = {});

/// Integral over [a, inf), mapped by u -> a + u/(1-u).
QuadResult integrate_to_inf(const Integrand& f, double a, QuadControl ctl = {});

/// Oscillatory tail helper: sums integrals of f over consecutive windows
/// [a + k*period, a + (k+1)*period) until a window contributes less than tol,
/// capped at max_windows.
QuadResult integrate_periodic_tail(const Integrand& f, double a, double period,
                                   double tol, std::size_t max_windows = 20000);

}  // namespace hsssi
