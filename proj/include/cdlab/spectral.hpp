#pragma once

#include <vector>

#include "cdlab/kernels.hpp"

namespace cdlab {

// Second largest absolute eigenvalue of a row-stochastic matrix, i.e. the
// largest absolute eigenvalue of P restricted to the complement of the
// stationary direction.  Both routes operate on the deflated matrix
// D = P - 1 pi', whose spectrum is spectrum(P) with the unit eigenvalue
// replaced by zero.
double spectral_alpha_dense(const TransitionMatrix& tm);
double spectral_alpha_power(const TransitionMatrix& tm, double tol = 1e-13,
                            long max_iter = 200000);

struct AlphaPair {
  double dense;
  double power;
};
AlphaPair spectral_alpha_both(const TransitionMatrix& tm);

// Dense for small matrices (<= 64 states), power iteration beyond.
double spectral_alpha(const TransitionMatrix& tm);

struct SpectralReport {
  std::vector<Vector> grid;
  std::vector<double> alpha_at;
  double alpha_sup = 0.0;
  bool near_one = false;  // alpha_sup >= 1 - 1e-6
};

SpectralReport alpha_sup_over_grid(const Kernel& kernel,
                                   const ParamDomain& domain,
                                   int points_per_dim);

// Mixing-rate estimate for continuous-state kernels: geometric decay rate of
// the lag-1..10 autocorrelation of each coordinate statistic of a long
// stationary chain, fitted by least squares through the origin on consecutive
// autocorrelation pairs; returns the slowest (largest) coordinate rate.
double gibbs_alpha_estimate(const Kernel& kernel, const Family& family,
                            const Vector& theta, long chain_length,
                            std::uint64_t seed);

}  // namespace cdlab
