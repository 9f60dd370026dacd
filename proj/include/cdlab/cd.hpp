#pragma once

#include <vector>

#include "cdlab/family.hpp"
#include "cdlab/kernels.hpp"

namespace cdlab {

struct CdConfig {
  double eta = 0.1;
  int m = 3;
  int steps = 1000;  // T
  Vector theta0;
  ParamDomain domain;
  bool projection = false;
  std::uint64_t seed = 0;
};

// Parameter chain theta_0..theta_T plus the gradient behind each update:
// thetas[t+1] = thetas[t] + eta * cd_grads[t] (projection off), so
// cd_grads[t] is the CD gradient evaluated at thetas[t].
struct Trajectory {
  std::vector<Vector> thetas;
  std::vector<Vector> cd_grads;
  CdConfig config;
  long clamped_steps = 0;  // projection events, counted when projection is on
};

// One CD stochastic gradient: n independent m-step chains, chain i started at
// data column i with its own (seed, step, i)-derived stream, reduced in index
// order.  phibar must be mean_suff_stat(data).
Vector cd_gradient(const Family& family, const Kernel& kernel,
                   const Matrix& data, const Vector& phibar,
                   const Vector& theta, int m, std::uint64_t seed,
                   std::uint64_t step = 0);
Vector cd_gradient(const Family& family, const Kernel& kernel,
                   const Matrix& data, const Vector& theta, int m,
                   std::uint64_t seed, std::uint64_t step = 0);

Vector cd_update(const Vector& theta, const Vector& g_cd, double eta,
                 const ParamDomain& domain, bool projection);

Trajectory run_cd(const Family& family, const Kernel& kernel,
                  const Matrix& data, const CdConfig& config);

// Coordinate-wise average of theta_{burn_in+1}..theta_T.
Vector ergodic_average(const Trajectory& traj, int burn_in);

}  // namespace cdlab
