#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "core/analysis.hpp"
#include "core/functionals.hpp"
#include "core/localtime.hpp"
#include "doctest.h"

using namespace hsssi;

TEST_CASE("prop1: linearity in phi for a fixed seed") {
  auto m = LevyModel::pure_stable(1.5);
  auto phi = TestFunctionPhi::indicator_combination({{-0.5, 0.5, 1.0}});
  auto s1 = prop1_sample(m, phi, 100.0, 0.0, {0.5, 1.0}, RngSpec{8, 1});
  auto s3 = prop1_sample(m, phi.scaled(3.0), 100.0, 0.0, {0.5, 1.0}, RngSpec{8, 1});
  for (std::size_t i = 0; i < s1.values.size(); ++i)
    CHECK(s3.values[i] == doctest::Approx(3.0 * s1.values[i]).epsilon(1e-12));
}

TEST_CASE("prop1: mean approaches E L_1(0) along a T ladder (desk scale)") {
  auto m = LevyModel::pure_stable(1.5);
  auto phi = TestFunctionPhi::indicator_combination({{-0.5, 0.5, 1.0}});  // mass 1
  const double target = 0.862058;
  double prev_err = 1e9;
  for (double T : {30.0, 300.0, 3000.0}) {
    auto samples = run_prop1_replicas(m, phi, T, 0.0, {1.0}, 3000, RngSpec{555, 0});
    double acc = 0.0;
    for (const auto& s : samples) acc += s.values[0];
    const double err = std::abs(acc / samples.size() - target);
    CHECK(err < prev_err + 0.02);
    prev_err = err;
  }
  CHECK(prev_err < 0.05);
}

TEST_CASE("rosen: centred values and determinism under worker counts") {
  auto phi = TestFunctionPhi::haar();
  auto samples = run_rosen_replicas(1.5, phi, 300.0, {1.0}, 2000, RngSpec{77, 0});
  double s = 0.0, s2 = 0.0;
  for (const auto& r : samples) {
    s += r.values[0];
    s2 += r.values[0] * r.values[0];
  }
  const double mean = s / samples.size();
  const double se = std::sqrt((s2 / samples.size() - mean * mean) / samples.size());
  CHECK(std::abs(mean) < 3.0 * se);

  setenv("HSSSI_THREADS", "1", 1);
  auto one = run_rosen_replicas(1.5, phi, 50.0, {0.5, 1.0}, 64, RngSpec{12, 0});
  setenv("HSSSI_THREADS", "2", 1);
  auto two = run_rosen_replicas(1.5, phi, 50.0, {0.5, 1.0}, 64, RngSpec{12, 0});
  unsetenv("HSSSI_THREADS");
  REQUIRE(one.size() == two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].values[0] == two[i].values[0]);
    CHECK(one[i].values[1] == two[i].values[1]);
  }
}

TEST_CASE("rosen: second moment near c(phi)^2 E L_1(0) (desk scale)") {
  auto phi = TestFunctionPhi::haar();
  auto model = LevyModel::pure_stable(1.5);
  const double cphi = c_phi(phi, model).value;
  auto samples = run_rosen_replicas(1.5, phi, 2000.0, {1.0}, 4000, RngSpec{31337, 0});
  double s2 = 0.0;
  for (const auto& r : samples) s2 += r.values[0] * r.values[0];
  s2 /= samples.size();
  const double target = cphi * cphi * 0.862058;
  CHECK(s2 == doctest::Approx(target).epsilon(0.12));
}

TEST_CASE("particle functional: zero phi, symmetry, determinism") {
  LimitSpec spec;
  spec.family = LimitFamily::FirstOrder;
  spec.params.alpha = 1.5;
  spec.params.beta = 1.5;
  auto model = LevyModel::pure_stable(1.5);
  auto L = SlowlyVarying::constant();
  auto zero = TestFunctionPhi::indicator_combination({});
  WindowPolicy window;

  auto r0 = particle_functional_sample(spec, model, L, zero, 50.0, {0.5, 1.0}, window,
                                       RngSpec{5, 5});
  CHECK(r0.sample.values[0] == 0.0);
  CHECK(r0.sample.values[1] == 0.0);
  CHECK(r0.particle_count > 0);

  auto phi = TestFunctionPhi::indicator_combination({{-0.5, 0.5, 1.0}});
  auto a = particle_functional_sample(spec, model, L, phi, 50.0, {1.0}, window,
                                      RngSpec{6, 6});
  auto b = particle_functional_sample(spec, model, L, phi, 50.0, {1.0}, window,
                                      RngSpec{6, 6});
  CHECK(a.sample.values[0] == b.sample.values[0]);
  CHECK(a.particle_count == b.particle_count);

  // Imaginary part of the ECF vanishes within noise for the symmetric system.
  auto samples = run_particle_replicas(spec, model, L, phi, 80.0, {1.0}, window, 1500,
                                       RngSpec{2024, 0});
  CfQuery q;
  q.theta = {0.5, 1.0, 2.0};
  q.coeffs = {1.0};
  q.times = {1.0};
  auto rep = ecf(samples, q);
  for (std::size_t i = 0; i < rep.theta.size(); ++i)
    CHECK(std::abs(rep.im[i]) < 3.5 * rep.se[i]);
}

TEST_CASE("particle functional: epsilon insensitivity at desk scale") {
  auto model = LevyModel::pure_stable(1.5);
  auto L = SlowlyVarying::constant();
  auto phi = TestFunctionPhi::indicator_combination({{-0.5, 0.5, 1.0}});
  WindowPolicy window;
  CfQuery q;
  q.theta = {0.3, 0.7, 1.2};
  q.coeffs = {1.0};
  q.times = {1.0};

  LimitSpec spec;
  spec.family = LimitFamily::FirstOrder;
  spec.params.alpha = 1.5;
  spec.params.beta = 1.5;
  spec.params.epsilon_cut = 1.0;
  auto s_full = run_particle_replicas(spec, model, L, phi, 150.0, {1.0}, window, 1200,
                                      RngSpec{111, 0});
  spec.params.epsilon_cut = 0.5;
  auto s_half = run_particle_replicas(spec, model, L, phi, 150.0, {1.0}, window, 1200,
                                      RngSpec{112, 0});
  auto e_full = ecf(s_full, q);
  auto e_half = ecf(s_half, q);
  for (std::size_t i = 0; i < q.theta.size(); ++i) {
    const double gap = std::abs(e_full.value(i) - e_half.value(i));
    CHECK(gap < 3.5 * std::hypot(e_full.se[i], e_half.se[i]) + 0.03);
  }
}

TEST_CASE("jsonl round trip preserves samples") {
  auto phi = TestFunctionPhi::haar();
  auto samples = run_rosen_replicas(1.5, phi, 50.0, {0.5, 1.0}, 16, RngSpec{4, 0});
  const std::string file = "test_samples.jsonl";
  write_samples_jsonl(samples, "rosen", 4, file);
  auto back = read_samples_jsonl(file);
  std::remove(file.c_str());
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(back[i].T == samples[i].T);
    CHECK(back[i].values == samples[i].values);
    CHECK(back[i].times == samples[i].times);
  }
}
