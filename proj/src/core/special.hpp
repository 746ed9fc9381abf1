#pragma once

namespace hsssi {

/// c(alpha) from the compensated power-law integral identity
/// c(a)|x|^a = int (1 - e^{ixu} + ixu 1_{|u|<=R}) |u|^{-1-a} du,
/// independent of x and R; evaluated by quadrature at x = 1, R = 1.
double stable_trick_constant(double alpha);

/// Same constant in closed form, -2 Gamma(-a) cos(pi a / 2); used as an
/// independent check of the quadrature route.
double stable_trick_constant_closed(double alpha);

/// LePage series constant C_a = (1-a) / (Gamma(2-a) cos(pi a/2)); a series
/// c = (C_a)^{-1/a} sum eps_j Gamma_j^{-1/a} is standard SaS.
double lepage_constant(double alpha);

/// E|N(0,1)|^a = 2^{a/2} Gamma((a+1)/2) / sqrt(pi).
double gaussian_abs_moment(double alpha);

/// E Gamma(k,1)^{-s} summed over k > n: tail variance weight of a truncated
/// LePage series with exponent s = 2/alpha.
double lepage_tail_weight(double alpha, int n_terms);

/// u^2/2 - (1 - cos u), evaluated without cancellation for small u.
double cos_remainder(double u);

}  // namespace hsssi
