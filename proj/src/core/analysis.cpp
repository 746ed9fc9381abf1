#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace hsssi {

std::vector<double> query_values(const std::vector<FunctionalSample>& samples,
                                 const std::vector<double>& coeffs,
                                 const std::vector<double>& times) {
  std::vector<double> out(samples.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const auto& s = samples[r];
    double acc = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      std::size_t idx = s.times.size();
      for (std::size_t k = 0; k < s.times.size(); ++k) {
        if (std::abs(s.times[k] - times[j]) < 1e-12) {
          idx = k;
          break;
        }
      }
      if (idx == s.times.size())
        throw std::invalid_argument("query time missing from sample");
      acc += coeffs[j] * s.values[idx];
    }
    out[r] = acc;
  }
  return out;
}

EcfReport ecf(const std::vector<FunctionalSample>& samples, const CfQuery& query) {
  if (samples.size() < 2) throw std::invalid_argument("ecf needs at least 2 samples");
  const auto vals = query_values(samples, query.coeffs, query.times);
  EcfReport rep;
  rep.theta = query.theta;
  rep.n = vals.size();
  rep.re.resize(query.theta.size());
  rep.im.resize(query.theta.size());
  rep.se.resize(query.theta.size());
  std::vector<double> cs(vals.size()), sn(vals.size());
  for (std::size_t i = 0; i < query.theta.size(); ++i) {
    const double th = query.theta[i];
    for (std::size_t r = 0; r < vals.size(); ++r) {
      cs[r] = std::cos(th * vals[r]);
      sn[r] = std::sin(th * vals[r]);
    }
    const double mre = pairwise_sum(cs) / vals.size();
    const double mim = pairwise_sum(sn) / vals.size();
    double v = 0.0;
    for (std::size_t r = 0; r < vals.size(); ++r) {
      v += (cs[r] - mre) * (cs[r] - mre) + (sn[r] - mim) * (sn[r] - mim);
    }
    v /= vals.size() - 1;
    rep.re[i] = mre;
    rep.im[i] = mim;
    rep.se[i] = std::sqrt(v / vals.size());
  }
  return rep;
}

std::vector<double> default_theta_grid(int points, double lo, double hi) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  return g;
}

namespace {

double sup_distance_at(const EcfReport& e, const CfCurve& target, double lam_pow,
                       std::size_t* worst) {
  double d = 0.0;
  for (std::size_t i = 0; i < e.theta.size(); ++i) {
    const double t_re = std::pow(target.value[i].real(), lam_pow);
    const double gap = std::abs(std::complex<double>(e.re[i] - t_re, e.im[i]));
    if (gap > d) {
      d = gap;
      if (worst) *worst = i;
    }
  }
  return d;
}

}  // namespace

CompareResult cf_compare(const EcfReport& e, const CfCurve& target, double k_sigma,
                         bool fit_scale, double alpha) {
  if (e.theta.size() != target.theta.size())
    throw std::invalid_argument("cf_compare: theta grids differ");
  for (std::size_t i = 0; i < e.theta.size(); ++i) {
    if (std::abs(e.theta[i] - target.theta[i]) > 1e-12)
      throw std::invalid_argument("cf_compare: theta grids differ");
    if (target.value[i].real() <= 0.0 || std::abs(target.value[i].imag()) > 1e-12)
      throw std::invalid_argument("cf_compare: target must be a positive real CF");
  }
  CompareResult out;
  out.fitted_scale = 1.0;
  if (fit_scale) {
    // Golden-section on log lambda; -log target scales like lambda^alpha.
    double lo = std::log(0.2), hi = std::log(5.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    auto dist_of = [&](double loglam) {
      return sup_distance_at(e, target, std::pow(std::exp(loglam), alpha), nullptr);
    };
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = dist_of(c), fd = dist_of(d);
    for (int it = 0; it < 60; ++it) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - gr * (hi - lo);
        fc = dist_of(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + gr * (hi - lo);
        fd = dist_of(d);
      }
    }
    out.fitted_scale = std::exp(0.5 * (lo + hi));
  }
  const double lam_pow = std::pow(out.fitted_scale, alpha);
  out.sup_distance = sup_distance_at(e, target, lam_pow, &out.worst_index);
  out.pass = true;
  for (std::size_t i = 0; i < e.theta.size(); ++i) {
    const double t_re = std::pow(target.value[i].real(), lam_pow);
    const double gap = std::abs(std::complex<double>(e.re[i] - t_re, e.im[i]));
    const double tol = k_sigma * std::hypot(e.se[i], lam_pow * target.se[i]) + 1e-9;
    if (gap > tol) {
      out.pass = false;
      out.worst_index = i;
    }
  }
  return out;
}

double selfsim_check(
    const std::function<std::complex<double>(double theta, double time_factor)>& cf,
    const std::vector<double>& theta, double H, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("selfsim_check: c must be positive");
  double d = 0.0;
  const double cH = std::pow(c, H);
  for (double th : theta) {
    d = std::max(d, std::abs(cf(th, c) - cf(cH * th, 1.0)));
  }
  return d;
}

bool ConvergenceLadder::strictly_decreasing() const {
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (!(entries[i].distance < entries[i - 1].distance)) return false;
  return true;
}

ConvergenceLadder moment_trend(const std::vector<double>& T_ladder,
                               const std::vector<std::vector<double>>& samples_per_T,
                               double target, int order, double rel_tol,
                               double k_sigma, std::uint64_t seed) {
  if (T_ladder.size() != samples_per_T.size() || T_ladder.empty())
    throw std::invalid_argument("moment_trend: ladder shape mismatch");
  ConvergenceLadder ladder;
  for (std::size_t li = 0; li < T_ladder.size(); ++li) {
    const auto& xs = samples_per_T[li];
    const std::size_t n = xs.size();
    std::vector<double> pw(n);
    for (std::size_t i = 0; i < n; ++i) pw[i] = std::pow(xs[i], order);
    const double moment = pairwise_sum(pw) / n;

    // Bootstrap SE: heavy-tailed powers make the plug-in formula unreliable.
    const int B = 500;
    Pcg64 rng(RngSpec{seed, 0xB007 + li});
    std::vector<double> boot(B);
    for (int b = 0; b < B; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += pw[rng.next() % n];
      boot[b] = acc / n;
    }
    const double bm = pairwise_sum(boot) / B;
    double bv = 0.0;
    for (double v : boot) bv += (v - bm) * (v - bm);
    const double se = std::sqrt(bv / (B - 1));

    LadderEntry ent;
    ent.T = T_ladder[li];
    ent.measured = moment;
    ent.se = se;
    ent.distance = std::abs(moment - target);
    ent.tolerance = rel_tol * std::abs(target) + k_sigma * se;
    ent.pass = ent.distance <= ent.tolerance;
    ladder.entries.push_back(ent);
  }
  return ladder;
}

void write_ecf_csv(const EcfReport& r, const CfCurve* target, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_ecf_csv: cannot open " + file);
  out << "# schema: hsssi-ecf-csv/1\n";
  out << "theta,ecf_re,ecf_im,se,target_re,target_im,target_se\n";
  out.precision(17);
  for (std::size_t i = 0; i < r.theta.size(); ++i) {
    out << r.theta[i] << ',' << r.re[i] << ',' << r.im[i] << ',' << r.se[i];
    if (target) {
      out << ',' << target->value[i].real() << ',' << target->value[i].imag() << ','
          << target->se[i];
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

}  // namespace hsssi
