#pragma once

#include "cdlab/kernels.hpp"

namespace cdlab {

// Ground-truth enumeration over the full discrete state space.  Every
// quantity here is computed from the raw joint weights c(x)exp(theta.phi(x)),
// with none of the conditional-independence shortcuts the family and kernel
// implementations use, so agreement between the routes is a real check.
class StateTable {
 public:
  explicit StateTable(const Family& family);

  int count() const { return count_; }
  const Family& family() const { return *family_; }
  // One state per column; column s is the bit pattern s (bit k = component k).
  const Matrix& states() const { return states_; }
  // phi(state) per column, aligned with states().
  const Matrix& stats() const { return stats_; }

  int state_index(const Vector& x) const;

  Vector exact_distribution(const Vector& theta) const;
  double cumulant(const Vector& theta) const;
  Vector mean_param(const Vector& theta) const;
  Matrix covariance(const Vector& theta) const;

  // Systematic-scan Gibbs matrix with block conditionals obtained by summing
  // the exact joint law (not from logistic formulas).
  TransitionMatrix gibbs_transition_matrix(const Vector& theta, int nv,
                                           int nh) const;

  // Mean CD gradient under the kernel's exact m-step law:
  // phibar - (1/n) sum_i (row of P^m at x_i) . phi.
  Vector exact_cd_gradient_mean(const Kernel& kernel, const Vector& theta,
                                const Matrix& data, int m) const;

 private:
  const Family* family_;
  int count_;
  Matrix states_;
  Matrix stats_;
};

// The reachable set of CD updates for {0,1}-valued statistics: every gradient
// is an integer vector divided by n, so iterates live on a lattice of this
// spacing through theta_0.
struct LatticeSpec {
  double spacing;  // eta / n
};
LatticeSpec exact_cd_gradient_support(const StateTable& table,
                                      const Matrix& data, double eta);

// P^m by repeated squaring-free multiplication (m is small here).
Matrix matrix_power(const Matrix& p, int m);

}  // namespace cdlab
