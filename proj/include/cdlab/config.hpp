#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cdlab/diagnostics.hpp"

namespace cdlab {

// Any structural problem with a config file: unknown keys, missing required
// keys, wrong types, inconsistent dimensions.  The message names the field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilyConfig {
  std::string name;           // gaussian_mean | binary_rbm
  Matrix sigma0;              // gaussian_mean only
  double stat_bound_c = 6.0;  // gaussian_mean only (surrogate C)
  int nv = 2;                 // binary_rbm only
  int nh = 2;
};

struct DataConfig {
  Vector theta_star;
  long n = 0;
  std::uint64_t seed = 1;
};

struct CdBlock {
  double eta = 0.0;  // resolved: family default when absent
  int m = 3;
  int steps = 1000;
  std::vector<Vector> starts;  // at least one
  bool projection = false;
  ParamDomain domain;  // resolved: family default when absent
};

// Everything cmd_diagnose needs.  constants_domain is the box over which
// lambda_min/lambda_max, L and alpha are measured (a config input: measuring
// them over the full trajectory box makes every bound vacuous for these
// instances; the report records which box was used).
struct DiagnosticsBlock {
  double gamma1 = 0.1;
  double gamma2 = 0.15;
  ParamDomain constants_domain;  // resolved: cd.domain when absent
  int constants_grid_points = 7;
  int alpha_grid_points = 5;
  long alpha_chain_length = 200000;  // continuous kernels: ACF chain length
  long replicates = 2000;            // bias/variance Monte Carlo
  std::vector<double> drift_radius_multipliers = {1.0, 1.5, 2.0};
  long drift_replicates = 2000;
  long hitting_replicates = 200;
  long hitting_horizon_cap = 1000000;
  long concentration_steps = 20000;
  long concentration_burn_in = 5000;
  long lattice_steps = 10000;
  double lattice_tolerance = 1e-9;
  int constraints_grid_points = 3;
  // Subset of {constants, constraints, bias, variance, drift, hitting,
  // concentration, lattice}; empty means every check applicable to the
  // family/kernel.
  std::vector<std::string> checks;
};

struct GridBlock {
  Vector lower;  // resolved: binary_rbm [0,1]^d, gaussian cd.domain
  Vector upper;
  int points = 6;
  int replicates = 5;
};

struct SweepBlock {
  std::vector<long> n_list;
  int seeds_per_n = 20;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  FamilyConfig family;
  std::string kernel;  // gaussian_gibbs | rbm_gibbs | exact_resample
  DataConfig data;
  CdBlock cd;
  DiagnosticsBlock diagnostics;
  std::optional<GridBlock> grid;
  std::optional<SweepBlock> sweep;
  std::string out_dir = ".";
  bool long_running = false;
};

// Strict parse: every key must be known, every required key present.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config_file(const std::string& path);

// Shipped experiment configurations; load_preset throws ConfigError for
// unknown names.
std::vector<std::string> preset_names();
ExperimentConfig load_preset(const std::string& name);

// Canonical JSON with all defaults resolved; parsing it back yields the same
// configuration, and manifests embed exactly this object.
Json resolved_config_json(const ExperimentConfig& config);

std::unique_ptr<Family> build_family(const ExperimentConfig& config);
std::unique_ptr<Kernel> build_kernel(const ExperimentConfig& config,
                                     const Family& family);

}  // namespace cdlab
