#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/rng.hpp"

namespace hsssi {

/// One functional realization observed at a list of times.
struct FunctionalSample {
  std::vector<double> times;
  std::vector<double> values;
  double T = 1.0;
  std::uint64_t replica = 0;
};

/// Stepping policy of the occupation integrator. Inside the refinement zone
/// (phi features padded by margin_steps fine displacements) steps are
/// dt_fine = (fine_frac * feature_scale)^beta; outside they grow like
/// (far_factor * gap)^beta, capped by dt_max_frac * horizon. All steps use
/// exact stable increments, so only the Riemann sum is approximate.
struct StepPolicy {
  double fine_frac = 0.08;
  double margin_steps = 12.0;
  double far_factor = 0.08;
  double dt_max_frac = 1.0 / 64.0;
  double dt_fine_override = 0.0;  // > 0 pins dt_fine directly

  double dt_fine(const TestFunctionPhi& phi, double beta) const;
};

/// Window policy for the particle field: the effective offsets C_T x_j are
/// confined to |C_T x| <= half_width_factor * D_T^{1/beta}.
struct WindowPolicy {
  double half_width_factor = 10.0;
  double truncation_tolerance = 0.02;
};

/// Single-path first-order functional of Proposition 1:
/// P_t(x) = F_T^{-1} int_0^{D_T t} phi(eta_s - T^{1/beta} x) ds with
/// F_T = T^{1-1/beta} f(T^{1/beta})^{-1}.
FunctionalSample prop1_sample(const LevyModel& model, const TestFunctionPhi& phi,
                              double T, double x, const std::vector<double>& times,
                              RngSpec rng, const StepPolicy& policy = {});

/// Single-path second-order (Rosen) functional:
/// F_T^{-1/2} int_0^{T t} phi(xi_s) ds with F_T = T^{1-1/beta}.
FunctionalSample rosen_sample(double beta, const TestFunctionPhi& phi, double T,
                              const std::vector<double>& times, RngSpec rng,
                              const StepPolicy& policy = {});

struct ParticleFunctionalResult {
  FunctionalSample sample;
  std::size_t particle_count = 0;
  double truncation_estimate = 0.0;
  bool truncation_warning = false;
};

/// Particle-system functional G_t^T: draws a Poisson field on the truncated
/// window, runs one independent motion per particle and accumulates
/// scale^{-1} sum_j z_j int_0^{D_T t} phi(C_T x_j + eta_u^j) du.
ParticleFunctionalResult particle_functional_sample(
    const LimitSpec& spec, const LevyModel& model, const SlowlyVarying& weight_L,
    const TestFunctionPhi& phi, double T, const std::vector<double>& times,
    const WindowPolicy& window, RngSpec rng, const StepPolicy& policy = {});

/// Replica batches; results are indexed by replica and independent of the
/// worker count. Replica r uses stream_id = base_stream + r.
std::vector<FunctionalSample> run_prop1_replicas(const LevyModel& model,
                                                 const TestFunctionPhi& phi, double T,
                                                 double x, const std::vector<double>& times,
                                                 std::size_t replicas, RngSpec base,
                                                 const StepPolicy& policy = {});

std::vector<FunctionalSample> run_rosen_replicas(double beta, const TestFunctionPhi& phi,
                                                 double T, const std::vector<double>& times,
                                                 std::size_t replicas, RngSpec base,
                                                 const StepPolicy& policy = {});

std::vector<FunctionalSample> run_particle_replicas(
    const LimitSpec& spec, const LevyModel& model, const SlowlyVarying& weight_L,
    const TestFunctionPhi& phi, double T, const std::vector<double>& times,
    const WindowPolicy& window, std::size_t replicas, RngSpec base,
    const StepPolicy& policy = {});

/// JSONL stream, one record per replica:
/// {"regime":..., "T":..., "seed":..., "stream":..., "times":[...], "values":[...]}
void write_samples_jsonl(const std::vector<FunctionalSample>& samples,
                         const std::string& regime, std::uint64_t seed,
                         const std::string& file);
std::vector<FunctionalSample> read_samples_jsonl(const std::string& file);

}  // namespace hsssi
