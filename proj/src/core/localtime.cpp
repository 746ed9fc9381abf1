#include "core/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "core/quadrature.hpp"
#include "core/stable.hpp"

namespace hsssi {

LocalTimeField estimate_local_time(const PathGrid& path, double x0, double dx, int n,
                                   double bandwidth, std::vector<double> times) {
  if (!(bandwidth >= 0.5 * dx))
    throw std::invalid_argument("estimate_local_time: bandwidth must be >= dx/2");
  if (!std::is_sorted(times.begin(), times.end()))
    std::sort(times.begin(), times.end());
  if (!times.empty() && times.back() > path.horizon + 1e-12)
    throw std::invalid_argument("estimate_local_time: observation time beyond horizon");

  LocalTimeField field;
  field.x0 = x0;
  field.dx = dx;
  field.n = n;
  field.bandwidth = bandwidth;
  field.times = times;
  field.table.assign(times.size() * n, 0.0);

  std::vector<double> row(n, 0.0);
  const double cell_mass = path.dt / (2.0 * bandwidth);
  std::size_t next_time = 0;
  const std::size_t steps = path.values.size();
  for (std::size_t k = 0; k < steps && next_time < times.size(); ++k) {
    const double s = k * path.dt;
    while (next_time < times.size() && s >= times[next_time] - 1e-12) {
      std::copy(row.begin(), row.end(), field.table.begin() + next_time * n);
      ++next_time;
    }
    if (next_time >= times.size()) break;
    const double pos = path.values[k];
    int lo = static_cast<int>(std::ceil((pos - bandwidth - x0) / dx - 1e-12));
    int hi = static_cast<int>(std::floor((pos + bandwidth - x0) / dx + 1e-12));
    lo = std::max(lo, 0);
    hi = std::min(hi, n - 1);
    for (int j = lo; j <= hi; ++j) row[j] += cell_mass;
  }
  while (next_time < times.size()) {
    std::copy(row.begin(), row.end(), field.table.begin() + next_time * n);
    ++next_time;
  }
  return field;
}

double occupation_integral(const PathGrid& path, const TestFunctionPhi& phi, double tau) {
  if (tau > path.horizon + 1e-12)
    throw std::invalid_argument("occupation_integral: tau beyond horizon");
  double acc = 0.0;
  const std::size_t steps = path.values.size();
  for (std::size_t k = 0; k < steps; ++k) {
    if (k * path.dt >= tau - 1e-12) break;
    acc += phi(path.values[k]);
  }
  return acc * path.dt;
}

namespace {

double simplex_power_mass(double a, int m) {
  // int over 0<u1<...<um, sum<=1 of prod (u_i - u_{i-1})^{-1/b} with
  // exponent a = 1 - 1/b per increment: Gamma(a)^m / Gamma(m a + 1).
  return std::pow(std::tgamma(a), m) / std::tgamma(m * a + 1.0);
}

}  // namespace

double local_time_moment_exact(double beta, double t, double x, int n) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("local_time_moment_exact: n must lie in 1..4");
  if (!(beta > 1.0 && beta < 2.0))
    throw std::invalid_argument("local_time_moment_exact: beta outside (1,2)");
  if (t == 0.0) return 0.0;
  const double a = 1.0 - 1.0 / beta;
  const StableDist& dist = StableDist::get(beta);
  const double p0 = dist.pdf0();
  double nfac = 1.0;
  for (int k = 2; k <= n; ++k) nfac *= k;
  if (x == 0.0) {
    return nfac * std::pow(p0, n) * std::pow(std::tgamma(a), n) *
           std::pow(t, n * a) / std::tgamma(n * a + 1.0);
  }
  // First factor visits x, the remaining n-1 renew at 0:
  // n! p1(0)^{n-1} G(a)^{n-1}/G((n-1)a+1) int_0^t p_u(x) (t-u)^{(n-1)a} du.
  const double tail_pow = (n - 1) * a;
  const double renew = std::pow(p0, n - 1) * simplex_power_mass(a, n - 1);
  QuadControl ctl;
  ctl.rel_tol = 1e-9;
  const double ax = std::abs(x);
  const auto integrand = [&](double u) {
    const double r = std::pow(u, -1.0 / beta);
    return r * dist.pdf(ax * r) * std::pow(t - u, tail_pow);
  };
  const double head = integrate(integrand, 0.0, 0.5 * t, ctl).value;
  const double rest = integrate(integrand, 0.5 * t, t, ctl).value;
  return nfac * renew * (head + rest);
}

double local_time_mixed_moment(double beta, double t, double x1, double x2) {
  const StableDist& dist = StableDist::get(beta);
  const double gap = std::abs(x2 - x1);
  QuadControl ctl;
  ctl.rel_tol = 1e-7;
  ctl.abs_tol = 1e-11;
  // E L_t(x1) L_t(x2) = sum over the two visit orders of
  //   int_0^t p_u(first) E L_{t-u}(gap) du,
  // the inner factor being the n=1 moment shifted by the entry point.
  auto term = [&](double first) {
    const double afirst = std::abs(first);
    return integrate(
               [&](double u) {
                 const double r = std::pow(u, -1.0 / beta);
                 const double pu = afirst == 0.0 ? dist.pdf0() * r
                                                 : r * dist.pdf(afirst * r);
                 return pu * local_time_moment_exact(beta, t - u,
                                                     gap == 0.0 ? 0.0 : gap, 1);
               },
               0.0, t, ctl)
        .value;
  };
  return term(x1) + term(x2);
}

void write_field_csv(const LocalTimeField& field, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + file);
  out << "# schema: hsssi-localtime-csv/1\n";
  out << "t,x,value\n";
  out.precision(17);
  for (std::size_t ti = 0; ti < field.times.size(); ++ti) {
    for (int k = 0; k < field.n; ++k) {
      out << field.times[ti] << ',' << field.x_at(k) << ',' << field.value(ti, k)
          << '\n';
    }
  }
}

}  // namespace hsssi
