#include <cmath>

#include "core/limits.hpp"
#include "core/localtime.hpp"
#include "core/special.hpp"
#include "doctest.h"

using namespace hsssi;

namespace {

FieldPoolConfig small_pool(std::size_t n = 1500) {
  FieldPoolConfig cfg;
  cfg.dt = 1e-3;
  cfg.dx = 0.04;
  cfg.grid_half_width = 16.0;
  cfg.integral_half_width = 8.0;
  cfg.n_fields = n;
  cfg.rng = RngSpec{9090, 0};
  return cfg;
}

}  // namespace

TEST_CASE("cf curves: value one at theta zero, bounds, homogeneity") {
  CfQuery q;
  q.theta = {0.0, 0.3, 1.0, 3.0};
  q.coeffs = {1.0, -0.5};
  q.times = {0.5, 1.0};
  auto pool = small_pool();
  auto curve = cf_first_order(q, 1.5, 1.5, 1.0, pool);
  CHECK(curve.value[0].real() == 1.0);
  CHECK(curve.value[0].imag() == 0.0);
  for (std::size_t i = 0; i < q.theta.size(); ++i) {
    CHECK(std::abs(curve.value[i]) <= 1.0 + 1e-12);
    CHECK(curve.value[i].imag() == 0.0);
    CHECK(curve.value[i].real() > 0.0);
  }

  // -log Phi is homogeneous of degree alpha in the coefficient vector.
  CfQuery q2 = q;
  for (auto& c : q2.coeffs) c *= 2.0;
  InnerQuery iq{q.coeffs, q.times}, iq2{q2.coeffs, q2.times};
  auto inner = inner_alpha_integrals(LimitKernel::LocalTime, 1.5, 1.5, 0, 0, {iq, iq2},
                                     small_pool(500));
  CHECK(inner[1].J == doctest::Approx(std::pow(2.0, 1.5) * inner[0].J).epsilon(1e-10));
}

TEST_CASE("first order: single-time tail slope of -log Phi is alpha") {
  CfQuery q;
  q.theta = {0.2, 0.4, 0.8};
  q.coeffs = {1.0};
  q.times = {1.0};
  auto curve = cf_first_order(q, 1.5, 1.5, 1.0, small_pool());
  // log(-log Phi) linear in log theta with slope alpha, exactly by
  // construction of the assembled CF.
  const double s1 = std::log(-std::log(curve.value[1].real())) -
                    std::log(-std::log(curve.value[0].real()));
  const double s2 = std::log(-std::log(curve.value[2].real())) -
                    std::log(-std::log(curve.value[1].real()));
  CHECK(s1 / std::log(2.0) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(s2 / std::log(2.0) == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("second order: conditional Gaussian identity per x") {
  // E|W_{L_t(x)}|^a = m_a E[L_t(x)^{a/2}] ties the W kernel to a fractional
  // moment of the same pool.
  const double alpha = 1.5, beta = 1.5;
  auto pool = small_pool(2000);
  InnerQuery iq{{1.0}, {1.0}};
  auto w_inner = inner_alpha_integrals(LimitKernel::BrownianTimeChange, alpha, beta, 0,
                                       0, {iq}, pool);
  // Independent route: E|W_s|^a = m_a s^{a/2}, so the inner integral equals
  // m_a int E[L^{a/2}] dx; estimate the latter with the LocalTime kernel at
  // exponent alpha/2 by querying |L|^{a/2} -- emulate via a second pool pass
  // with alpha' = alpha/2.
  auto l_inner = inner_alpha_integrals(LimitKernel::LocalTime, alpha / 2.0, beta, 0, 0,
                                       {iq}, pool);
  const double m_a = gaussian_abs_moment(alpha);
  const double lhs = w_inner[0].J;
  const double rhs = m_a * l_inner[0].J;
  CHECK(lhs == doctest::Approx(rhs).epsilon(3.0 * std::hypot(w_inner[0].se, m_a * l_inner[0].se) / rhs + 0.01));
}

TEST_CASE("kernel_Z: zero field, symmetric field, reflection antisymmetry") {
  LocalTimeField f;
  f.x0 = -2.0;
  f.dx = 0.04;
  f.n = 101;
  f.bandwidth = 0.02;
  f.times = {1.0};
  f.table.assign(101, 0.0);
  auto z0 = kernel_Z(f, 1.1, 0.0, false);
  CHECK(z0[0] == 0.0);

  // Symmetric bump about x = 0: symmetric kernel vanishes identically.
  for (int k = 0; k < 101; ++k) {
    const double x = f.x0 + k * f.dx;
    f.table[k] = std::exp(-x * x);
  }
  auto zs = kernel_Z(f, 1.1, 0.0, false);
  CHECK(zs[0] == doctest::Approx(0.0).epsilon(1e-12));

  // Asymmetric field: reflecting it about x flips the sign exactly.
  for (int k = 0; k < 101; ++k) {
    const double x = f.x0 + k * f.dx;
    f.table[k] = std::exp(-(x - 0.4) * (x - 0.4)) * (1.0 + 0.3 * std::sin(3 * x));
  }
  auto z_plus = kernel_Z(f, 1.1, 0.0, false);
  LocalTimeField g = f;
  for (int k = 0; k < 101; ++k) g.table[k] = f.table[100 - k];
  auto z_minus = kernel_Z(g, 1.1, 0.0, false);
  CHECK(z_plus[0] == doctest::Approx(-z_minus[0]).epsilon(1e-10));

  LocalTimeField coarse = f;
  coarse.dx = 0.2;
  CHECK_THROWS_AS(kernel_Z(coarse, 1.1, 0.0, false), std::invalid_argument);
}

TEST_CASE("heavy kernel finiteness: E|Z_1(x)| profile decays") {
  auto pool = small_pool(800);
  InnerQuery iq{{1.0}, {1.0}};
  auto inner = inner_alpha_integrals(LimitKernel::HeavySymmetric, 1.0, 1.5, 1.1, 1.1,
                                     {iq}, pool);
  CHECK(std::isfinite(inner[0].J));
  CHECK(inner[0].J > 0.0);
  // Golden from the seeded oracle run at this configuration.
  CHECK(inner[0].J == doctest::Approx(9.0).epsilon(0.5));
}

TEST_CASE("lepage: degenerate kappa, symmetry, CF cross-validation") {
  LimitSpec spec;
  spec.family = LimitFamily::FirstOrder;
  spec.params.alpha = 1.5;
  spec.params.beta = 1.5;

  LePageOptions opt;
  opt.n_terms = 150;
  opt.window_half_width = 8.0;
  opt.dt = 2e-3;
  opt.kappa = 0.0;
  auto z = lepage_sample(spec, {0.5, 1.0}, opt, RngSpec{1, 1});
  CHECK(z.values[0] == 0.0);
  CHECK(z.values[1] == 0.0);

  opt.kappa = 1.0;
  const int reps = 1500;
  std::vector<double> draws(reps);
  for (int r = 0; r < reps; ++r) {
    auto s = lepage_sample(spec, {1.0}, opt, RngSpec{33, static_cast<unsigned>(r)});
    draws[r] = s.values[0];
  }
  // Sign-flip symmetry: mean of sign within binomial noise.
  double signsum = 0.0;
  for (double v : draws) signsum += v > 0 ? 1 : -1;
  CHECK(std::abs(signsum) < 3.0 * std::sqrt(static_cast<double>(reps)));

  // ECF against the assembled first-order CF on the same window.
  FieldPoolConfig pool = small_pool(4000);
  pool.integral_half_width = opt.window_half_width;
  CfQuery q;
  q.theta = {0.25, 0.5, 1.0};
  q.coeffs = {1.0};
  q.times = {1.0};
  auto target = cf_first_order(q, 1.5, 1.5, 1.0, pool);
  for (std::size_t i = 0; i < q.theta.size(); ++i) {
    double s = 0.0, s2 = 0.0;
    for (double v : draws) {
      s += std::cos(q.theta[i] * v);
      s2 += std::cos(q.theta[i] * v) * std::cos(q.theta[i] * v);
    }
    const double mean = s / reps;
    const double se = std::sqrt((s2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean - target.value[i].real()) <
          3.0 * std::hypot(se, target.se[i]) + 0.02);
  }
}
