#pragma once

#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/rng.hpp"

namespace hsssi {

/// One trajectory on a uniform grid: values[k] is the position at time k*dt,
/// values[0] = 0.
struct PathGrid {
  double dt = 0.0;
  double horizon = 0.0;
  std::vector<double> values;
};

/// Simulates the Levy motion of the model on a uniform grid. Pure-stable
/// increments are exact; the rv-density scheme draws jumps above
/// delta = dt^{1/beta} from the normalized density and folds the remaining
/// small-jump activity into one stable increment whose exponent matches psi
/// restricted to |x| <= delta at theta = 1.
PathGrid simulate_path(const LevyModel& model, double horizon, double dt, RngSpec rng);

/// Poisson field of (position, weight) pairs on [window_lo, window_hi].
struct ParticleField {
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::vector<double> positions;
  std::vector<double> weights;
};

/// Mean number of particles per unit window length,
/// m = 2 int_eps^inf z^{-1-alpha} L(z) dz.
double particle_intensity(const ModelParams& params, const SlowlyVarying& weight_L);

ParticleField sample_particle_field(const ModelParams& params,
                                    const SlowlyVarying& weight_L, double window_lo,
                                    double window_hi, RngSpec rng);

/// Draws one |weight| from the normalized tail law z^{-1-alpha} L(z) on
/// [eps, inf); exact inversion for constant L, rejection otherwise.
double sample_weight_magnitude(double alpha, double eps, const SlowlyVarying& weight_L,
                               Pcg64& rng);

/// Binary path dump: little-endian header (dt, horizon as f64, count as u64)
/// followed by count f64 positions.
void write_path_dump(const PathGrid& path, const std::string& file);
PathGrid read_path_dump(const std::string& file);

}  // namespace hsssi
