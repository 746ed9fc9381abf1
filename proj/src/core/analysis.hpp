#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "core/functionals.hpp"
#include "core/limits.hpp"

namespace hsssi {

/// Empirical characteristic function with per-theta standard errors.
struct EcfReport {
  std::vector<double> theta;
  std::vector<double> re;
  std::vector<double> im;
  std::vector<double> se;
  std::size_t n = 0;

  std::complex<double> value(std::size_t i) const { return {re[i], im[i]}; }
};

/// ecf(theta) = (1/N) sum_r exp(i theta sum_j a_j value_{r,j}).
EcfReport ecf(const std::vector<FunctionalSample>& samples, const CfQuery& query);

/// Default 16-point geometric theta grid on [0.1, 4].
std::vector<double> default_theta_grid(int points = 16, double lo = 0.1, double hi = 4.0);

struct CompareResult {
  double sup_distance = 0.0;
  bool pass = false;
  double fitted_scale = 1.0;
  std::size_t worst_index = 0;
};

/// Sup-distance |ecf - target| with a per-theta pass rule
/// |diff| <= k_sigma * combined_se + target_tol. With fit_scale, one scalar
/// lambda multiplying the coefficient vector is optimized first using the
/// degree-alpha homogeneity of -log(target).
CompareResult cf_compare(const EcfReport& ecf_report, const CfCurve& target,
                         double k_sigma, bool fit_scale, double alpha);

/// max_theta |cf(theta, c) - cf(c^H theta, 1)|; the callable evaluates the
/// limit CF at time set scaled by its second argument.
double selfsim_check(
    const std::function<std::complex<double>(double theta, double time_factor)>& cf,
    const std::vector<double>& theta, double H, double c);

struct LadderEntry {
  double T = 0.0;
  double distance = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double measured = 0.0;
  double se = 0.0;
};

struct ConvergenceLadder {
  std::vector<LadderEntry> entries;
  bool final_pass() const { return !entries.empty() && entries.back().pass; }
  bool strictly_decreasing() const;
};

/// Moment trend along a T ladder: per T the empirical moment of the given
/// order with a bootstrap standard error (500 resamples, seeded); pass iff
/// |moment - target| <= rel_tol |target| + k_sigma se (absolute rule when
/// target is 0).
ConvergenceLadder moment_trend(const std::vector<double>& T_ladder,
                               const std::vector<std::vector<double>>& samples_per_T,
                               double target, int order, double rel_tol,
                               double k_sigma, std::uint64_t seed);

/// Scalar series of one query applied to a sample set.
std::vector<double> query_values(const std::vector<FunctionalSample>& samples,
                                 const std::vector<double>& coeffs,
                                 const std::vector<double>& times);

void write_ecf_csv(const EcfReport& r, const CfCurve* target, const std::string& file);

}  // namespace hsssi
