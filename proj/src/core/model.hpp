#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace hsssi {

// ---------------------------------------------------------------------------
// Slowly varying presets
// ---------------------------------------------------------------------------

/// Closed catalogue of slowly-varying functions, extended symmetrically to
/// negative arguments. Arbitrary user functions are rejected elsewhere
/// because the regular-variation hypotheses cannot be checked for black
/// boxes.
class SlowlyVarying {
 public:
  enum class Preset { Constant, Log, IteratedLog };

  static SlowlyVarying constant(double c = 1.0) { return {Preset::Constant, c}; }
  static SlowlyVarying log() { return {Preset::Log, 1.0}; }
  static SlowlyVarying iterated_log() { return {Preset::IteratedLog, 1.0}; }
  static std::optional<SlowlyVarying> from_name(const std::string& name, double c = 1.0);

  double operator()(double u) const;
  Preset preset() const { return preset_; }
  double constant_value() const { return c_; }
  bool is_unit_constant() const { return preset_ == Preset::Constant && c_ == 1.0; }
  std::string name() const;

 private:
  SlowlyVarying(Preset p, double c) : preset_(p), c_(c) {}
  Preset preset_;
  double c_;
};

// ---------------------------------------------------------------------------
// Test functions phi
// ---------------------------------------------------------------------------

/// One signed rectangle c * 1_{(a, b]}.
struct IndicatorTerm {
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
};

/// Test function of the occupation functional. Three representations:
/// signed indicator combinations, a difference of two Gaussian bumps, and
/// the heavy-tail pair  f1 = y^{-gamma1} g1(y) on y >= 1 against
/// -f2 = -|y|^{-gamma2} g2(|y|) on y <= -1 (zero in between, the f2 side
/// rescaled so the total integral vanishes exactly).
class TestFunctionPhi {
 public:
  enum class Kind { IndicatorCombination, GaussianBumpDifference, HeavyTailPair };

  struct GaussianBump {
    double amplitude = 1.0;
    double mean = 0.0;
    double sigma = 1.0;
  };

  static TestFunctionPhi indicator_combination(std::vector<IndicatorTerm> terms);
  /// The classic Haar-type example 1_{(0,1]} - 1_{[-1,0)}.
  static TestFunctionPhi haar();
  static TestFunctionPhi gaussian_bump_difference(GaussianBump plus, GaussianBump minus,
                                                  bool balance_to_zero_mass);
  static TestFunctionPhi heavy_tail_pair(double gamma1, double gamma2,
                                         SlowlyVarying g1, SlowlyVarying g2);

  Kind kind() const { return kind_; }
  double operator()(double y) const;
  /// Analytic total integral.
  double integral() const { return integral_; }
  std::complex<double> fourier(double w) const;
  /// Half-width of the support, infinity for the heavy pair.
  double support_radius() const;
  /// Abscissae where phi has jumps or kinks; the path integrator refines
  /// its stepping around these.
  const std::vector<double>& feature_points() const { return features_; }
  /// Smallest feature separation, used to pick the fine step.
  double feature_scale() const { return feature_scale_; }
  TestFunctionPhi scaled(double lambda) const;

  double gamma1() const { return gamma1_; }
  double gamma2() const { return gamma2_; }
  double heavy_balance() const { return heavy_balance_; }
  const SlowlyVarying& g1_sv() const { return g1_; }
  const SlowlyVarying& g2_sv() const { return g2_; }
  const std::vector<IndicatorTerm>& indicator_terms() const { return terms_; }

 private:
  TestFunctionPhi() = default;
  void finalize_features();

  Kind kind_ = Kind::IndicatorCombination;
  std::vector<IndicatorTerm> terms_;
  GaussianBump plus_{}, minus_{};
  double gamma1_ = 0.0, gamma2_ = 0.0;
  SlowlyVarying g1_ = SlowlyVarying::constant();
  SlowlyVarying g2_ = SlowlyVarying::constant();
  double heavy_balance_ = 1.0;  // multiplies the f2 side so that integral()==0
  double amp_ = 1.0;            // overall multiplier installed by scaled()
  double integral_ = 0.0;
  std::vector<double> features_;
  double feature_scale_ = 1.0;
};

// ---------------------------------------------------------------------------
// Levy model
// ---------------------------------------------------------------------------

/// Symmetric Levy motion of Assumption (A): either the pure beta-stable
/// exponent |z|^beta or the regularly-varying density
/// nu(dx) = c(beta)^{-1} f(x) |x|^{-1-beta} dx with a slowly-varying preset f.
class LevyModel {
 public:
  enum class Kind { PureStable, RvDensity };

  static LevyModel pure_stable(double beta);
  static LevyModel rv_density(double beta, SlowlyVarying f);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  const SlowlyVarying& slowly_varying() const { return f_; }
  /// Normalizing constant c(beta) of Assumption (A), cached at construction.
  double c_beta() const { return c_beta_; }
  bool is_pure_stable() const { return kind_ == Kind::PureStable; }

 private:
  LevyModel(Kind k, double beta, SlowlyVarying f);
  Kind kind_;
  double beta_;
  SlowlyVarying f_;
  double c_beta_;
};

/// Characteristic exponent psi(z); exact |z|^beta for the pure-stable kind,
/// adaptive quadrature of the Levy-Khintchine integral otherwise.
double psi(const LevyModel& model, double z);

/// psi_T(z) = T f(T^{1/beta})^{-1} psi(z / T^{1/beta}), T >= 1.
double psi_scaled(const LevyModel& model, double T, double z);

// ---------------------------------------------------------------------------
// Parameters, limit families, validation
// ---------------------------------------------------------------------------

struct ModelParams {
  double alpha = 1.5;
  double beta = 1.5;
  double epsilon_cut = 1.0;
  std::optional<double> kappa_c;  // Assumption (C) exponent, in (0,1)
  std::optional<double> kappa_d;  // Assumption (D) Hoelder exponent, > (beta-1)/2
};

enum class LimitFamily { FirstOrder, SecondOrder, HeavySymmetric, HeavyAsymmetric };

struct LimitSpec {
  LimitFamily family = LimitFamily::FirstOrder;
  ModelParams params;
  double gamma1 = 0.0;  // heavy families only
  double gamma2 = 0.0;
  double gamma_min() const { return family == LimitFamily::HeavyAsymmetric
                                        ? (gamma1 < gamma2 ? gamma1 : gamma2)
                                        : gamma1; }
};

struct Violation {
  std::string assumption;  // "A", "B", "C", "D" or a theorem hypothesis tag
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const ModelParams& params, const TestFunctionPhi& phi,
                          LimitFamily family,
                          const std::optional<LimitSpec>& spec = std::nullopt);
ValidationReport validate(const LimitSpec& spec, const TestFunctionPhi& phi);

// ---------------------------------------------------------------------------
// Normalizations, Hurst exponents, c(phi)
// ---------------------------------------------------------------------------

struct Normalization {
  double scale = 1.0;  // N_T or F_T
  double C_T = 1.0;
  double D_T = 1.0;
};

/// The exact theorem normalizations: first order
/// N_T = T^{1-1/b+1/(ab)} f(T^{1/b})^{-1}, C_T = L(T^{1/(ab)}),
/// D_T = T f(T^{1/b})^{-1}; second order F_T = T^{(b-1)/(2b)+1/(ab)};
/// heavy F_T = g1(T^{1/b}) T^{1+1/(ab)-gamma/b}. For the latter two C_T = 1
/// and D_T = T.
Normalization normalization(LimitFamily family, double T, const ModelParams& params,
                            const SlowlyVarying& f, const SlowlyVarying& weight_L,
                            const SlowlyVarying& g1, double gamma_min);

/// Hurst exponent of the limit family.
double hurst(const LimitSpec& spec);

enum class CPhiConvention {
  /// sqrt((1/pi) int |phihat|^2 / psi): the constant the moment computation
  /// actually produces; default, confirmed by the Rosen variance experiment.
  SqrtPiInverse,
  /// (1/pi) sqrt(int |phihat|^2 / psi): the statement-display variant.
  Proposition2,
  /// sqrt(int |phihat|^2 |w|^{-beta}): the bare L2 form.
  PlainL2,
};

struct CPhiResult {
  double value = 0.0;        // c(phi) under the requested convention
  double integral = 0.0;     // int |phihat(w)|^2 psi(w)^{-1} dw
  double cross_check = 0.0;  // same integral from an independent partition
};

/// Second-order constant c(phi). Requires integral(phi)==0 and tails light
/// enough that |phihat(w)|^2 psi(w)^{-1} is integrable at the origin; throws
/// std::domain_error with a divergence message otherwise.
CPhiResult c_phi(const TestFunctionPhi& phi, const LevyModel& model,
                 CPhiConvention convention = CPhiConvention::SqrtPiInverse);

/// Ratio (int_w^1 h(z)^{-1} dz) / (w h(w)^{-1}) for h(z) = z^beta * ell(z),
/// ell a slowly-varying preset evaluated at 1/z; tends to 1/(beta-1).
double rv_tail_integral_check(double beta, const SlowlyVarying& ell, double w);

}  // namespace hsssi
