#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "cdlab/param_domain.hpp"
#include "cdlab/rng.hpp"

namespace cdlab {

// Raised by mle() when the sample moment lies on the boundary of the mean
// range, so no finite maximizer exists.
struct NoInteriorMle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by mle() when Newton fails to reach tolerance.
struct MleDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponential family p_theta(x) = c(x) exp(theta . phi(x) - cumulant(theta)).
//
// Data samples are stored one observation per column (state_dim x n), which
// keeps the inner CD loops contiguous.
class Family {
 public:
  virtual ~Family() = default;

  virtual const std::string& name() const = 0;
  virtual int dim() const = 0;        // length of theta and phi
  virtual int state_dim() const = 0;  // length of x

  virtual double log_carrier(const Vector& x) const = 0;
  virtual void suff_stat(const Vector& x, Vector& phi) const = 0;
  Vector suff_stat(const Vector& x) const;

  virtual double cumulant(const Vector& theta) const = 0;
  virtual Vector mean_param(const Vector& theta) const = 0;
  virtual Matrix covariance(const Vector& theta) const = 0;

  // One exact draw from p_theta.
  virtual void sample_state(const Vector& theta, Rng& rng, Vector& x) const = 0;

  // Bound C with phi(X) in [-C, C]^d.  exact when the statistic really is
  // bounded (binary families); otherwise a configured surrogate recorded with
  // an assumption flag by diagnostics.
  virtual double stat_bound() const = 0;
  virtual bool stat_bound_exact() const = 0;

  // True when the sample moment admits an interior maximizer.
  virtual bool moment_in_interior(const Vector& phibar) const { return true; }

  // Discrete families enumerate their states; continuous ones return 0.
  virtual int enumerable_states() const { return 0; }

  Matrix sample_data(const Vector& theta, int n, std::uint64_t seed) const;
  Vector mean_suff_stat(const Matrix& data) const;
  double log_likelihood(const Matrix& data, const Vector& theta) const;
  // phibar - mean_param(theta); gradient of the average log-likelihood.
  Vector exact_gradient(const Vector& phibar, const Vector& theta) const;

  // Default box constraints used by the experiments.
  virtual ParamDomain default_domain() const = 0;
};

struct MleOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

struct MleResult {
  Vector theta;
  int iterations = 0;
  double residual = 0.0;
};

// Damped Newton solve of mean_param(theta) = phibar.
MleResult mle(const Family& family, const Vector& phibar,
              const MleOptions& options = {});
MleResult mle(const Family& family, const Matrix& data,
              const MleOptions& options = {});

// Bivariate (or p-variate) normal with known covariance Sigma0 and unknown
// natural parameter; the carrier is the centered N(0, Sigma0) density, so
// cumulant(theta) = theta' Sigma0 theta / 2 and the model mean is Sigma0 theta.
std::unique_ptr<Family> make_gaussian_mean(const Matrix& sigma0,
                                           double stat_bound_c = 6.0);

// Fully observed RBM on {0,1}^(nv+nh) with zero biases; phi is the flattened
// outer product h v' with entry index i*nv + j for hidden i, visible j.
std::unique_ptr<Family> make_binary_rbm(int nv, int nh);

}  // namespace cdlab
