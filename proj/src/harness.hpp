// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the srbeam authors

#ifndef SRBEAM_HARNESS_HPP
#define SRBEAM_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "beamform.hpp"

namespace srbeam::harness {

enum class Scenario {
  kRateRegion,
  kSnrSweep,
  kTpmEpsCSweep,
  kTpmEpsSSweep,
  kValidate,
};

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

// Full experiment description; every run embeds its canonical form (and a
// hash of it) in the output header so results are reproducible byte for
// byte from the header alone.
struct ExperimentConfig {
  Scenario scenario = Scenario::kValidate;
  channel::SystemParams params;
  double delta_gamma_db = -10.0;
  int realizations = 200;
  std::vector<double> rho_grid;     // default: 21 uniform points on [0, 1]
  std::vector<double> snr_db_grid;  // default: 0, 5, ..., 25
  std::vector<double> eps_grid;     // TPM sweep grid
  double eps_s_fixed = 1.0;
  double eps_c_fixed = 0.1;
  std::uint64_t seed = 1;
  std::string output_path;
  bool full_scale = false;  // restores the 1e4-realization setting
  beamform::SolverConfig solver;
  std::string mutation;  // validation fault-injection hook (tests only)

  void validate() const;
  int effective_realizations() const { return full_scale ? 10000 : realizations; }
  std::string canonical_json() const;
  std::uint64_t config_hash() const;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig config_from_toml(const std::string& text);
// Dispatches on the file extension (.json / .toml).
ExperimentConfig load_config(const std::string& path);

struct RunSummary {
  Scenario scenario = Scenario::kValidate;
  std::string output_path;
  int rows = 0;
  bool validation_passed = true;
  std::string to_json() const;
};

// Runs the configured scenario, writing a CSV table (or a JSON report for
// the validation scenario) to output_path.
RunSummary run_experiment(const ExperimentConfig& cfg);

struct CheckResult {
  std::string name;
  bool passed = false;
  double tolerance = 0.0;
  double measured = 0.0;
  std::string details;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed = false;
  std::string to_json() const;
};

// Invariant battery: special-function identities, the distribution check,
// the span-restriction oracle test and a solver-vs-oracle sample.
ValidationReport run_validation(const ExperimentConfig& cfg);

// P(dBm) = SNR(dB) + sigma^2(dBm) under the 0 dB pathloss convention.
double power_dbm(double power_linear, double noise_power, double noise_dbm);

}  // namespace srbeam::harness

#endif
