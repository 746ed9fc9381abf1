#include "core/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "core/quadrature.hpp"
#include "core/special.hpp"

namespace hsssi {

// ---------------------------------------------------------------------------
// SlowlyVarying
// ---------------------------------------------------------------------------

double SlowlyVarying::operator()(double u) const {
  u = std::abs(u);
  switch (preset_) {
    case Preset::Constant:
      return c_;
    case Preset::Log:
      return std::log(M_E + u);
    case Preset::IteratedLog:
      return std::log(M_E + std::log(M_E + u));
  }
  return c_;
}

std::optional<SlowlyVarying> SlowlyVarying::from_name(const std::string& name, double c) {
  if (name == "constant") return constant(c);
  if (name == "log") return log();
  if (name == "iterated-log") return iterated_log();
  return std::nullopt;
}

std::string SlowlyVarying::name() const {
  switch (preset_) {
    case Preset::Constant:
      return "constant";
    case Preset::Log:
      return "log";
    case Preset::IteratedLog:
      return "iterated-log";
  }
  return "constant";
}

// ---------------------------------------------------------------------------
// TestFunctionPhi
// ---------------------------------------------------------------------------

TestFunctionPhi TestFunctionPhi::indicator_combination(std::vector<IndicatorTerm> terms) {
  TestFunctionPhi phi;
  phi.kind_ = Kind::IndicatorCombination;
  phi.terms_ = std::move(terms);
  double total = 0.0;
  for (const auto& t : phi.terms_) {
    if (!(t.a < t.b)) throw std::invalid_argument("indicator term needs a < b");
    total += t.c * (t.b - t.a);
  }
  phi.integral_ = total;
  phi.finalize_features();
  return phi;
}

TestFunctionPhi TestFunctionPhi::haar() {
  return indicator_combination({{0.0, 1.0, 1.0}, {-1.0, 0.0, -1.0}});
}

TestFunctionPhi TestFunctionPhi::gaussian_bump_difference(GaussianBump plus,
                                                          GaussianBump minus,
                                                          bool balance_to_zero_mass) {
  TestFunctionPhi phi;
  phi.kind_ = Kind::GaussianBumpDifference;
  if (balance_to_zero_mass) minus.amplitude = plus.amplitude * plus.sigma / minus.sigma;
  phi.plus_ = plus;
  phi.minus_ = minus;
  const double s2pi = std::sqrt(2.0 * M_PI);
  phi.integral_ = s2pi * (plus.amplitude * plus.sigma - minus.amplitude * minus.sigma);
  if (balance_to_zero_mass) phi.integral_ = 0.0;
  phi.finalize_features();
  return phi;
}

TestFunctionPhi TestFunctionPhi::heavy_tail_pair(double gamma1, double gamma2,
                                                 SlowlyVarying g1, SlowlyVarying g2) {
  TestFunctionPhi phi;
  phi.kind_ = Kind::HeavyTailPair;
  phi.gamma1_ = gamma1;
  phi.gamma2_ = gamma2;
  phi.g1_ = g1;
  phi.g2_ = g2;
  auto side_mass = [](double gamma, const SlowlyVarying& g) {
    if (g.preset() == SlowlyVarying::Preset::Constant)
      return g.constant_value() / (gamma - 1.0);
    QuadControl ctl;
    return integrate_to_inf([gamma, &g](double y) { return std::pow(y, -gamma) * g(y); },
                            1.0, ctl)
        .value;
  };
  if (!(gamma1 > 1.0 && gamma2 > 1.0))
    throw std::invalid_argument("heavy-tail pair needs gamma1, gamma2 > 1");
  phi.heavy_balance_ = side_mass(gamma1, g1) / side_mass(gamma2, g2);
  phi.integral_ = 0.0;  // exact by the balancing construction
  phi.finalize_features();
  return phi;
}

void TestFunctionPhi::finalize_features() {
  features_.clear();
  switch (kind_) {
    case Kind::IndicatorCombination: {
      if (terms_.empty()) {  // the zero function
        features_ = {0.0};
        feature_scale_ = 1.0;
        break;
      }
      double smallest = 1e300;
      for (const auto& t : terms_) {
        features_.push_back(t.a);
        features_.push_back(t.b);
        smallest = std::min(smallest, t.b - t.a);
      }
      feature_scale_ = smallest;
      break;
    }
    case Kind::GaussianBumpDifference:
      features_ = {plus_.mean, minus_.mean};
      feature_scale_ = std::min(plus_.sigma, minus_.sigma);
      break;
    case Kind::HeavyTailPair:
      features_ = {-1.0, 1.0};
      feature_scale_ = 1.0;
      break;
  }
}

double TestFunctionPhi::operator()(double y) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::IndicatorCombination:
      for (const auto& t : terms_)
        if (y > t.a && y <= t.b) v += t.c;
      break;
    case Kind::GaussianBumpDifference: {
      const double zp = (y - plus_.mean) / plus_.sigma;
      const double zm = (y - minus_.mean) / minus_.sigma;
      v = plus_.amplitude * std::exp(-0.5 * zp * zp) -
          minus_.amplitude * std::exp(-0.5 * zm * zm);
      break;
    }
    case Kind::HeavyTailPair:
      if (y >= 1.0)
        v = std::pow(y, -gamma1_) * g1_(y);
      else if (y <= -1.0)
        v = -heavy_balance_ * std::pow(-y, -gamma2_) * g2_(-y);
      break;
  }
  return amp_ * v;
}

std::complex<double> TestFunctionPhi::fourier(double w) const {
  using cplx = std::complex<double>;
  if (w == 0.0) return {integral_, 0.0};
  cplx acc{0.0, 0.0};
  switch (kind_) {
    case Kind::IndicatorCombination: {
      const cplx iw{0.0, w};
      for (const auto& t : terms_)
        acc += t.c * (std::exp(iw * t.b) - std::exp(iw * t.a)) / iw;
      break;
    }
    case Kind::GaussianBumpDifference: {
      const double s2pi = std::sqrt(2.0 * M_PI);
      acc = cplx(plus_.amplitude * plus_.sigma * s2pi *
                     std::exp(-0.5 * plus_.sigma * plus_.sigma * w * w)) *
            std::exp(cplx(0.0, plus_.mean * w));
      acc -= cplx(minus_.amplitude * minus_.sigma * s2pi *
                      std::exp(-0.5 * minus_.sigma * minus_.sigma * w * w)) *
             std::exp(cplx(0.0, minus_.mean * w));
      break;
    }
    case Kind::HeavyTailPair: {
      // int_1^inf y^{-g} g(y) e^{iwy} dy for each side; oscillatory but with
      // decaying envelope, integrated in windows of one period.
      auto side = [w](double gamma, const SlowlyVarying& g) {
        const double period = 2.0 * M_PI / std::abs(w);
        QuadControl ctl;
        ctl.abs_tol = 1e-12;
        auto re_f = [&](double y) { return std::pow(y, -gamma) * g(y) * std::cos(w * y); };
        auto im_f = [&](double y) { return std::pow(y, -gamma) * g(y) * std::sin(w * y); };
        const double head = std::max(1.0 + 4.0 * period, 8.0);
        double re = integrate(re_f, 1.0, head, ctl).value;
        double im = integrate(im_f, 1.0, head, ctl).value;
        re += integrate_periodic_tail(re_f, head, period, 1e-12).value;
        im += integrate_periodic_tail(im_f, head, period, 1e-12).value;
        return cplx{re, im};
      };
      acc = side(gamma1_, g1_);
      // The mirrored side: int_{-inf}^{-1} -bal |y|^{-g2} g2 e^{iwy} dy
      //                  = -bal conj(int_1^inf y^{-g2} g2 e^{iwy} dy).
      acc -= heavy_balance_ * std::conj(side(gamma2_, g2_));
      break;
    }
  }
  return amp_ * acc;
}

double TestFunctionPhi::support_radius() const {
  switch (kind_) {
    case Kind::IndicatorCombination: {
      double r = 0.0;
      for (const auto& t : terms_) r = std::max({r, std::abs(t.a), std::abs(t.b)});
      return r;
    }
    case Kind::GaussianBumpDifference:
      return std::max(std::abs(plus_.mean) + 8.0 * plus_.sigma,
                      std::abs(minus_.mean) + 8.0 * minus_.sigma);
    case Kind::HeavyTailPair:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

TestFunctionPhi TestFunctionPhi::scaled(double lambda) const {
  TestFunctionPhi copy = *this;
  copy.amp_ *= lambda;
  copy.integral_ *= lambda;
  return copy;
}

// ---------------------------------------------------------------------------
// LevyModel, psi, psi_scaled
// ---------------------------------------------------------------------------

LevyModel::LevyModel(Kind k, double beta, SlowlyVarying f)
    : kind_(k), beta_(beta), f_(f), c_beta_(stable_trick_constant(beta)) {
  if (!(beta > 1.0 && beta < 2.0))
    throw std::invalid_argument("LevyModel: beta must lie in (1,2)");
}

LevyModel LevyModel::pure_stable(double beta) {
  return LevyModel(Kind::PureStable, beta, SlowlyVarying::constant());
}

LevyModel LevyModel::rv_density(double beta, SlowlyVarying f) {
  return LevyModel(Kind::RvDensity, beta, f);
}

namespace {

// J(z) = int_0^inf (1 - cos v) f(v/z) v^{-1-beta} dv, assembled from a
// regularized head (v = w^p removes the v^{1-beta} endpoint singularity), an
// adaptive middle, a monotone tail and an oscillatory tail summed by periods.
double levy_khintchine_profile(double z, double beta, const SlowlyVarying& f,
                               double* achieved_err) {
  const double q = 2.0 / (2.0 - beta);
  const double v0 = 0.5;
  QuadControl ctl;  // spec tolerances: abs 1e-10, rel 1e-8
  // Head: (1-cos v) = v^2/2 - r(v); the power piece is regularized by
  // v = w^q, the remainder piece is smooth as it stands.
  const Integrand head_power = [&](double w) {
    const double v = std::pow(w, q);
    return 0.5 * f(v / z) * q * std::pow(w, q * (2.0 - beta) - 1.0);
  };
  const Integrand head_rem = [&](double v) {
    return cos_remainder(v) * f(v / z) * std::pow(v, -1.0 - beta);
  };
  QuadResult r_head = integrate(head_power, 0.0, std::pow(v0, 1.0 / q), ctl);
  QuadResult r_head2 = integrate(head_rem, 0.0, v0, ctl);
  r_head.value -= r_head2.value;
  r_head.abs_error += r_head2.abs_error;
  QuadResult r_mid = integrate(
      [&](double v) { return (1.0 - std::cos(v)) * f(v / z) * std::pow(v, -1.0 - beta); },
      v0, 8.0 * M_PI, ctl);
  QuadResult r_tail = integrate_to_inf(
      [&](double v) { return f(v / z) * std::pow(v, -1.0 - beta); }, 8.0 * M_PI, ctl);
  const double scale = r_head.value + r_mid.value + r_tail.value;
  QuadResult r_osc = integrate_periodic_tail(
      [&](double v) { return std::cos(v) * f(v / z) * std::pow(v, -1.0 - beta); },
      8.0 * M_PI, 2.0 * M_PI, 1e-10 * std::max(scale, 1.0));
  if (achieved_err) {
    *achieved_err = r_head.abs_error + r_mid.abs_error + r_tail.abs_error +
                    r_osc.abs_error;
  }
  return r_head.value + r_mid.value + r_tail.value - r_osc.value;
}

}  // namespace

double psi(const LevyModel& model, double z) {
  z = std::abs(z);
  if (z == 0.0) return 0.0;
  if (model.is_pure_stable()) return std::pow(z, model.beta());
  double err = 0.0;
  const double profile = levy_khintchine_profile(z, model.beta(),
                                                 model.slowly_varying(), &err);
  const double value = std::pow(z, model.beta()) * 2.0 / model.c_beta() * profile;
  if (err > 1e-4 * std::abs(profile)) {
    std::ostringstream msg;
    msg << "psi quadrature did not reach tolerance: achieved relative error "
        << err / std::abs(profile);
    throw std::runtime_error(msg.str());
  }
  return value;
}

double psi_scaled(const LevyModel& model, double T, double z) {
  if (T < 1.0) throw std::invalid_argument("psi_scaled: T must be >= 1");
  if (z == 0.0) return 0.0;
  if (model.is_pure_stable()) return std::pow(std::abs(z), model.beta());
  const double root = std::pow(T, 1.0 / model.beta());
  return T / model.slowly_varying()(root) * psi(model, z / root);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << "[" << v.assumption << "] " << v.message << "\n";
  return os.str();
}

namespace {

void check_ranges(const ModelParams& p, ValidationReport& r) {
  if (!(p.beta > 1.0 && p.beta < 2.0))
    r.violations.push_back({"A", "beta outside (1,2)"});
  if (!(p.alpha > 1.0 && p.alpha < 2.0))
    r.violations.push_back({"B", "alpha outside (1,2)"});
  if (!(p.epsilon_cut > 0.0))
    r.violations.push_back({"B", "epsilon cutoff must be positive"});
  if (p.kappa_c && !(*p.kappa_c > 0.0 && *p.kappa_c < 1.0))
    r.violations.push_back({"C", "kappa_c outside (0,1)"});
  if (p.kappa_d && p.beta > 1.0 && p.beta < 2.0 &&
      !(*p.kappa_d > (p.beta - 1.0) / 2.0))
    r.violations.push_back({"D", "kappa_d must exceed (beta-1)/2"});
}

}  // namespace

ValidationReport validate(const ModelParams& params, const TestFunctionPhi& phi,
                          LimitFamily family, const std::optional<LimitSpec>& spec) {
  ValidationReport r;
  check_ranges(params, r);
  const double gamma_window =
      params.beta > 1.0 && params.beta < 2.0 ? 1.0 + (params.beta - 1.0) / 2.0 : 1.5;
  switch (family) {
    case LimitFamily::FirstOrder:
      if (phi.integral() == 0.0)
        r.violations.push_back(
            {"THM1", "first-order regime requires a non-vanishing integral of phi"});
      break;
    case LimitFamily::SecondOrder:
      if (phi.integral() != 0.0)
        r.violations.push_back({"THM2", "second-order regime requires integral(phi)=0"});
      if (phi.kind() == TestFunctionPhi::Kind::HeavyTailPair &&
          std::min(phi.gamma1(), phi.gamma2()) < gamma_window)
        r.violations.push_back(
            {"D", "phi tails too heavy for Assumption (D): min(gamma) below 1+(beta-1)/2"});
      break;
    case LimitFamily::HeavySymmetric:
    case LimitFamily::HeavyAsymmetric: {
      if (phi.integral() != 0.0)
        r.violations.push_back({"THM3", "heavy-tail regime requires integral(phi)=0"});
      double g1 = phi.gamma1(), g2 = phi.gamma2();
      if (spec) {
        g1 = spec->gamma1;
        g2 = spec->family == LimitFamily::HeavySymmetric ? spec->gamma1 : spec->gamma2;
      }
      if (!(g1 > 1.0) || !(g2 > 1.0))
        r.violations.push_back({"THM3", "gamma exponents must exceed 1"});
      if (!(std::min(g1, g2) < gamma_window)) {
        std::ostringstream os;
        os << "min(gamma1,gamma2) must lie below 1+(beta-1)/2 = " << gamma_window;
        r.violations.push_back({"THM3", os.str()});
      }
      break;
    }
  }
  return r;
}

ValidationReport validate(const LimitSpec& spec, const TestFunctionPhi& phi) {
  return validate(spec.params, phi, spec.family, spec);
}

// ---------------------------------------------------------------------------
// Normalization / Hurst
// ---------------------------------------------------------------------------

Normalization normalization(LimitFamily family, double T, const ModelParams& params,
                            const SlowlyVarying& f, const SlowlyVarying& weight_L,
                            const SlowlyVarying& g1, double gamma_min) {
  if (T < 1.0) throw std::invalid_argument("normalization: T must be >= 1");
  const double a = params.alpha, b = params.beta;
  const double root_b = std::pow(T, 1.0 / b);
  Normalization n;
  switch (family) {
    case LimitFamily::FirstOrder:
      n.scale = std::pow(T, 1.0 - 1.0 / b + 1.0 / (a * b)) / f(root_b);
      n.C_T = weight_L(std::pow(T, 1.0 / (a * b)));
      n.D_T = T / f(root_b);
      break;
    case LimitFamily::SecondOrder:
      n.scale = std::pow(T, (b - 1.0) / (2.0 * b) + 1.0 / (a * b));
      n.C_T = 1.0;
      n.D_T = T;
      break;
    case LimitFamily::HeavySymmetric:
    case LimitFamily::HeavyAsymmetric:
      n.scale = g1(root_b) * std::pow(T, 1.0 + 1.0 / (a * b) - gamma_min / b);
      n.C_T = 1.0;
      n.D_T = T;
      break;
  }
  return n;
}

double hurst(const LimitSpec& spec) {
  const double a = spec.params.alpha, b = spec.params.beta;
  switch (spec.family) {
    case LimitFamily::FirstOrder:
      return 1.0 - 1.0 / b + 1.0 / (a * b);
    case LimitFamily::SecondOrder: {
      const double bt = 1.0 - 1.0 / b;
      return bt / 2.0 + (1.0 - bt) / a;
    }
    case LimitFamily::HeavySymmetric:
    case LimitFamily::HeavyAsymmetric:
      return 1.0 + 1.0 / (a * b) - spec.gamma_min() / b;
  }
  return 0.5;
}

// ---------------------------------------------------------------------------
// c(phi)
// ---------------------------------------------------------------------------

namespace {

double cphi_integral(const TestFunctionPhi& phi, const LevyModel& model,
                     double head_end, double window_offset) {
  QuadControl ctl;
  ctl.abs_tol = 1e-13;
  ctl.rel_tol = 1e-10;
  const auto f = [&](double w) {
    const double a = std::abs(phi.fourier(w));
    return a * a / psi(model, w);
  };
  // Panels seamed at pi keep the oscillation resolved per panel.
  double acc = 0.0;
  double lo = 0.0;
  while (lo < head_end - 1e-12) {
    const double hi = std::min(lo + M_PI, head_end);
    acc += integrate(f, lo, hi, ctl).value;
    lo = hi;
  }
  acc *= 2.0;
  const double period = 2.0 * M_PI;
  acc += 2.0 * integrate_periodic_tail(f, head_end + window_offset, period,
                                       1e-12 * std::max(acc, 1e-6))
             .value;
  if (window_offset > 0.0)
    acc += 2.0 * integrate(f, head_end, head_end + window_offset, ctl).value;
  return acc;
}

}  // namespace

CPhiResult c_phi(const TestFunctionPhi& phi, const LevyModel& model,
                 CPhiConvention convention) {
  if (phi.integral() != 0.0)
    throw std::domain_error("c_phi requires integral(phi) = 0");
  if (phi.kind() == TestFunctionPhi::Kind::HeavyTailPair) {
    const double window = 1.0 + (model.beta() - 1.0) / 2.0;
    if (std::min(phi.gamma1(), phi.gamma2()) < window)
      throw std::domain_error(
          "c_phi integral diverges: phi tails heavier than |y|^{-1-(beta-1)/2}");
  }
  CPhiResult out;
  out.integral = cphi_integral(phi, model, 16.0 * M_PI, 0.0);
  out.cross_check = cphi_integral(phi, model, 12.0 * M_PI, M_PI);
  switch (convention) {
    case CPhiConvention::SqrtPiInverse:
      out.value = std::sqrt(out.integral / M_PI);
      break;
    case CPhiConvention::Proposition2:
      out.value = std::sqrt(out.integral) / M_PI;
      break;
    case CPhiConvention::PlainL2:
      out.value = std::sqrt(out.integral);
      break;
  }
  return out;
}

double rv_tail_integral_check(double beta, const SlowlyVarying& ell, double w) {
  if (!(w > 0.0 && w < 1.0))
    throw std::invalid_argument("rv_tail_integral_check: w must lie in (0,1)");
  // h(z) = z^beta ell(1/z); integrate in x = -log z for dynamic range.
  QuadControl ctl;
  const double L = -std::log(w);
  const double num =
      integrate([&](double x) {
        const double z = std::exp(-x);
        return std::exp((beta - 1.0) * x) / ell(1.0 / z);
      }, 0.0, L, ctl).value;
  const double denom = w * std::pow(w, -beta) / ell(1.0 / w);
  return num / denom;
}

}  // namespace hsssi
