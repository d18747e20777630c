#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stripspec/profile.hpp"
#include "stripspec/types.hpp"

namespace stripspec {

// Run configuration parsed from the JSON config file. The file is the single
// source of truth for an experiment; command-line flags only pick the config
// path and a few overrides. Unknown keys are rejected.
struct RunConfig {
  std::string command;  // eigs | phase | verify | features | mesh-dump
  Profile profile = Profile::constant(0.0);

  std::vector<Real> N_list;  // eigs/verify/features sweeps
  Real L = 8.0;              // truncated length for scattering
  int J = 32;                // base vertical intervals
  int levels = 3;            // ladder depth, ratio 2
  std::optional<int> I_cap;  // explicit overrides of the auto resolution
  std::optional<int> I_strip;
  int m_count = 2;
  int K = 8;  // modal boundary block depth
  bool grading = false;
  Real grade_kappa = 0.5;  // applied when grading is on

  Real eig_tol = 1e-9;
  int max_iter = 140;

  std::vector<Real> eps_sweep;  // phase: first-order-law sweep when non-empty
  std::optional<Real> A_cut;    // phase: cutoff for the b constant
  std::optional<std::array<Real, 2>> window;  // phase: line-fit window
  std::optional<Real> figure2_eps;  // features: run the two-domain experiment

  // verify thresholds (check enable flags all default on)
  Real check_cross_method_tol = 2e-3;
  Real check_slope_max = -4.0;
  Real check_lambda5_rel_tol = 0.30;
  bool check_cross_method = true;
  bool check_expansion_slope = true;
  bool check_lambda5 = true;

  std::string output_dir = ".";
  int jobs = 0;  // 0: hardware concurrency
};

// Parse and validate a config file for the given command. Throws ConfigError
// with a schema message on any violation.
RunConfig load_config(const std::string& path, const std::string& command);

// Parse the profile sub-object from JSON text (exposed for tests).
Profile profile_from_json_text(const std::string& json_text);

}  // namespace stripspec
