#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/functionals.hpp"
#include "core/limits.hpp"
#include "core/model.hpp"

namespace hsssi {

/// Raised on malformed or unknown configuration input; the CLI maps it to
/// exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ThetaGridSpec {
  int points = 16;
  double min = 0.1;
  double max = 4.0;
};

struct QuerySpec {
  std::vector<double> coeffs;
};

/// One experiment, parsed strictly: unknown keys are rejected by name and a
/// seed is mandatory (no wall-clock fallback).
struct ExperimentConfig {
  std::string kind;  // particle-ladder | prop1-ladder | rosen-ladder | psi-ladder
  std::uint64_t seed = 0;
  LimitSpec regime;
  bool model_pure_stable = true;
  SlowlyVarying model_f = SlowlyVarying::constant();
  SlowlyVarying weight_L = SlowlyVarying::constant();
  TestFunctionPhi phi = TestFunctionPhi::haar();
  std::vector<double> T_ladder{100.0, 1000.0};
  std::size_t replicas = 2000;
  std::vector<double> times{0.5, 1.0};
  ThetaGridSpec theta;
  std::vector<QuerySpec> queries;  // defaults installed per kind
  WindowPolicy window;
  StepPolicy steps;
  FieldPoolConfig pool;
  double k_sigma = 3.0;
  bool fit_scale = true;

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
};

struct ExperimentSummary {
  std::string kind;
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string to_json_text() const;
};

/// Runs the configured experiment end to end, writing JSONL/CSV artifacts
/// and a summary JSON into out_dir. Deterministic in (config, seed),
/// independent of the worker count.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::string& out_dir);

/// Aggregates every summary.json beneath a run directory.
std::string report_run_dir(const std::string& dir);

}  // namespace hsssi
