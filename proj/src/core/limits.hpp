#pragma once

#include <complex>
#include <vector>

#include "core/functionals.hpp"
#include "core/localtime.hpp"
#include "core/model.hpp"
#include "core/rng.hpp"

namespace hsssi {

/// Finite-dimensional CF query: coefficients a_j attached to sorted times.
struct CfQuery {
  std::vector<double> theta;
  std::vector<double> coeffs;
  std::vector<double> times;
};

/// Shared pool of simulated local-time fields driving the inner expectations
/// of the limit characteristic functions. Fields are streamed: generated,
/// consumed, discarded; results are deterministic in rng and independent of
/// the worker count.
struct FieldPoolConfig {
  double dt = 1e-4;
  double dx = 0.04;
  double grid_half_width = 28.0;   // local-time grid on [-w, w]
  double integral_half_width = 10.0;  // x-range of the outer integral
  std::size_t n_fields = 20000;
  int w_replicates = 4;  // Gaussian redraws per field and x (second order)
  RngSpec rng{20240101, 0};
};

enum class LimitKernel { LocalTime, BrownianTimeChange, HeavySymmetric, HeavyAsymmetric };

struct InnerQuery {
  std::vector<double> coeffs;
  std::vector<double> times;
};

struct InnerResult {
  double J = 0.0;   // int E|sum_j a_j K_{t_j}(x)|^alpha dx over the window
  double se = 0.0;  // Monte Carlo standard error of J
};

/// One streaming pass over the pool evaluating every query; kernels use
/// gamma1/gamma2 only in the heavy cases. When per_field is given it
/// receives the per-field window integrals (n_fields rows, one column per
/// query, row-major), which lets callers form correlated differences.
std::vector<InnerResult> inner_alpha_integrals(LimitKernel kernel, double alpha,
                                               double beta, double gamma1,
                                               double gamma2,
                                               const std::vector<InnerQuery>& queries,
                                               const FieldPoolConfig& pool,
                                               std::vector<double>* per_field = nullptr);

struct CfCurve {
  std::vector<double> theta;
  std::vector<std::complex<double>> value;
  std::vector<double> se;  // propagated MC error of the target
  double inner_J = 0.0;
  double inner_se = 0.0;
};

/// Assembles exp(-c(alpha) |theta kappa|^alpha J) from an inner integral.
CfCurve cf_from_inner(const std::vector<double>& theta, double alpha, double kappa,
                      const InnerResult& inner);

/// Theorem-1 limit CF with kappa = integral(phi).
CfCurve cf_first_order(const CfQuery& q, double alpha, double beta, double int_phi,
                       const FieldPoolConfig& pool);

/// Theorem-2 limit CF with kappa = c(phi).
CfCurve cf_second_order(const CfQuery& q, double alpha, double beta, double c_phi_value,
                        const FieldPoolConfig& pool);

/// Theorem-3 limit CF (kappa = 1) for the symmetric or asymmetric kernel.
CfCurve cf_heavy(const CfQuery& q, double alpha, double beta, double gamma1,
                 double gamma2, bool asymmetric, const FieldPoolConfig& pool);

/// Fractional kernels of the heavy-tail limit evaluated at one point from an
/// estimated local-time field: symmetric
///   Z_t(x)  = int_0^inf y^-g (L_t(x+y) - L_t(x-y)) dy
/// and asymmetric
///   Zt_t(x) = int_0^inf y^-g1 (L_t(x+y) - L_t(x)) dy.
/// The [0, 10 dx] part interpolates the field linearly; the tail beyond the
/// grid uses L = 0 (and, asymmetric, the exact -L_t(x) y^{1-g}/(g-1) term).
std::vector<double> kernel_Z(const LocalTimeField& field, double gamma, double x,
                             bool asymmetric);

/// Reusable evaluator of the same kernels over many grid indices; the
/// power-cell weights are built once per (gamma, dx, n).
class HeavyKernel {
 public:
  HeavyKernel(double gamma, double dx, int n, bool asymmetric);
  /// Kernel values at the absolute grid indices xs from one local-time row.
  void eval_row(const double* L, int n, const std::vector<int>& xs,
                double* out) const;

 private:
  double gamma_;
  double dx_;
  bool asym_;
  int k0_;
  double w_inf_;
  std::vector<double> w_;
};

struct LePageOptions {
  std::size_t n_terms = 400;
  double window_half_width = 10.0;
  double kappa = 1.0;          // regime constant multiplying the kernel
  bool gaussian_completion = true;
  double dt = 1e-3;            // per-term path resolution
  double dx = 0.04;
};

/// Approximate draw of the limit law by a truncated LePage series
///   (c(alpha) 2X / C_alpha)^{1/alpha} kappa sum_i eps_i Gamma_i^{-1/alpha}
///        K(t; x_i, path_i),
/// optionally completing the truncated tail by a Gaussian with the exact
/// remaining-series variance.
FunctionalSample lepage_sample(const LimitSpec& spec, const std::vector<double>& times,
                               const LePageOptions& options, RngSpec rng);

}  // namespace hsssi
