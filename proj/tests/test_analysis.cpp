#include <cmath>

#include "core/analysis.hpp"
#include "doctest.h"

using namespace hsssi;

namespace {

std::vector<FunctionalSample> scalar_samples(const std::vector<double>& xs) {
  std::vector<FunctionalSample> out;
  for (double x : xs) {
    FunctionalSample s;
    s.times = {1.0};
    s.values = {x};
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("ecf: constants, paired symmetry, gaussian reference") {
  CfQuery q;
  q.theta = {0.0, 0.5, 1.0};
  q.coeffs = {1.0};
  q.times = {1.0};

  auto zero = ecf(scalar_samples(std::vector<double>(64, 0.0)), q);
  for (std::size_t i = 0; i < q.theta.size(); ++i) {
    CHECK(zero.re[i] == 1.0);
    CHECK(zero.im[i] == 0.0);
    CHECK(zero.se[i] == 0.0);
  }

  // Paired sign-flipped samples kill the imaginary part exactly.
  std::vector<double> xs;
  Pcg64 rng(RngSpec{5, 0});
  for (int i = 0; i < 500; ++i) {
    const double v = rng.normal() + 0.3;
    xs.push_back(v);
    xs.push_back(-v);
  }
  auto paired = ecf(scalar_samples(xs), q);
  for (std::size_t i = 0; i < q.theta.size(); ++i)
    CHECK(paired.im[i] == doctest::Approx(0.0).epsilon(1e-15));

  // Standard normal synthetic draws against exp(-theta^2/2).
  std::vector<double> gs;
  for (int i = 0; i < 60000; ++i) gs.push_back(rng.normal());
  auto g = ecf(scalar_samples(gs), q);
  CHECK(std::abs(g.re[2] - std::exp(-0.5)) < 3.0 * g.se[2]);
  CHECK(g.n == gs.size());
  for (std::size_t i = 0; i < q.theta.size(); ++i) {
    CHECK(std::abs(g.value(i)) <= 1.0 + 3.0 / std::sqrt(static_cast<double>(g.n)));
    CHECK(g.se[i] <= 1.0 / std::sqrt(static_cast<double>(g.n)));
  }
}

TEST_CASE("cf_compare: exact match, flagged shift, fitted scale") {
  const double alpha = 1.5;
  CfCurve target;
  target.theta = default_theta_grid(8, 0.1, 2.0);
  for (double th : target.theta) {
    target.value.push_back({std::exp(-std::pow(th, alpha)), 0.0});
    target.se.push_back(0.0);
  }

  EcfReport self;
  self.theta = target.theta;
  self.n = 1000;
  for (std::size_t i = 0; i < target.theta.size(); ++i) {
    self.re.push_back(target.value[i].real());
    self.im.push_back(0.0);
    self.se.push_back(0.01);
  }
  auto r = cf_compare(self, target, 3.0, false, alpha);
  CHECK(r.sup_distance == 0.0);
  CHECK(r.pass);

  EcfReport shifted = self;
  shifted.re[3] += 10.0 * shifted.se[3];
  auto r2 = cf_compare(shifted, target, 3.0, false, alpha);
  CHECK_FALSE(r2.pass);
  CHECK(r2.worst_index == 3);

  // Samples scaled by lambda: fitted scale recovers it through the
  // degree-alpha homogeneity.
  const double lam = 1.7;
  EcfReport scaled = self;
  for (std::size_t i = 0; i < target.theta.size(); ++i)
    scaled.re[i] = std::exp(-std::pow(lam, alpha) * std::pow(target.theta[i], alpha));
  auto r3 = cf_compare(scaled, target, 3.0, true, alpha);
  CHECK(r3.fitted_scale == doctest::Approx(lam).epsilon(1e-4));
  CHECK(r3.pass);

  EcfReport wrong = self;
  wrong.theta[0] += 0.01;
  CHECK_THROWS_AS(cf_compare(wrong, target, 3.0, false, alpha), std::invalid_argument);
}

TEST_CASE("selfsim_check: identity at c=1 and sensitivity to wrong H") {
  const double alpha = 1.5, H = 7.0 / 9.0;
  auto cf = [&](double theta, double time_factor) {
    // Exactly H-sssi single-time CF: exp(-(time_factor^{alpha H}) |theta|^alpha).
    return std::complex<double>(
        std::exp(-std::pow(time_factor, alpha * H) * std::pow(std::abs(theta), alpha)),
        0.0);
  };
  auto grid = default_theta_grid();
  CHECK(selfsim_check(cf, grid, 0.123, 1.0) == 0.0);
  CHECK(selfsim_check(cf, grid, H, 2.0) < 1e-14);
  CHECK(selfsim_check(cf, grid, H + 0.1, 2.0) > 0.01);
}

TEST_CASE("moment_trend: constants pass at zero distance, symmetric mean") {
  std::vector<double> ladder{10.0, 100.0};
  std::vector<std::vector<double>> per_T{{2.0, 2.0, 2.0, 2.0}, {2.0, 2.0, 2.0, 2.0}};
  auto lad = moment_trend(ladder, per_T, 2.0, 1, 0.1, 3.0, 99);
  CHECK(lad.entries.size() == 2);
  for (const auto& e : lad.entries) {
    CHECK(e.pass);
    CHECK(e.distance == 0.0);
  }

  // Centered samples pass the order-1 test against target zero.
  Pcg64 rng(RngSpec{17, 0});
  std::vector<double> sym(20000);
  for (auto& v : sym) v = rng.normal();
  auto lad2 = moment_trend({100.0}, {sym}, 0.0, 1, 0.0, 3.0, 99);
  CHECK(lad2.entries[0].pass);
}
