#pragma once

#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/sampling.hpp"

namespace hsssi {

/// Occupation-density table: rows are observation times, columns the space
/// grid x_k = x0 + k*dx. Entries are box-kernel estimates
/// Lhat_t(x) = (1/2h) sum_{s<t} dt 1{|xi_s - x| <= h}.
struct LocalTimeField {
  double x0 = 0.0;
  double dx = 1.0;
  int n = 0;
  double bandwidth = 0.0;
  std::vector<double> times;
  std::vector<double> table;  // times.size() rows, n columns, row-major

  double value(std::size_t time_idx, int k) const { return table[time_idx * n + k]; }
  double x_at(int k) const { return x0 + dx * k; }
};

LocalTimeField estimate_local_time(const PathGrid& path, double x0, double dx, int n,
                                   double bandwidth, std::vector<double> times);

/// Riemann occupation integral sum_{s < tau} dt phi(xi_s).
double occupation_integral(const PathGrid& path, const TestFunctionPhi& phi, double tau);

/// Exact local-time moment E L_t(x)^n of the symmetric beta-stable motion.
/// At x = 0 this is the closed form
///   n! p1(0)^n Gamma(1-1/b)^n t^{n(1-1/b)} / Gamma(n(1-1/b)+1),
/// away from 0 the simplex integral reduces to one quadrature in the first
/// visit time. n is capped at 4.
double local_time_moment_exact(double beta, double t, double x, int n);

/// Mixed moment E L_t(x1) L_t(x2) via the two-permutation simplex formula.
double local_time_mixed_moment(double beta, double t, double x1, double x2);

/// CSV with columns (t, x, value) and a schema header comment.
void write_field_csv(const LocalTimeField& field, const std::string& file);

}  // namespace hsssi
