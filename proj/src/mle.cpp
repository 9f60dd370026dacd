#include <Eigen/Cholesky>

#include "cdlab/family.hpp"

namespace cdlab {

// Damped Newton on the moment-matching equation mean_param(theta) = phibar.
// The average log-likelihood is strictly concave wherever the covariance is
// positive definite, so the Newton direction ascends it; step halving guards
// the few cases where a full step overshoots.
MleResult mle(const Family& family, const Vector& phibar,
              const MleOptions& options) {
  if (!family.moment_in_interior(phibar))
    throw NoInteriorMle(family.name() +
                        ": sample moment on the boundary of the mean range, "
                        "no interior maximizer exists");

  Vector theta = Vector::Zero(family.dim());
  Vector residual = phibar - family.mean_param(theta);
  double res_norm = residual.norm();
  int iter = 0;
  for (; iter < options.max_iter && res_norm > options.tol; ++iter) {
    Matrix cov = family.covariance(theta);
    Eigen::LDLT<Matrix> ldlt(cov);
    Vector direction = ldlt.solve(residual);
    if (!direction.allFinite())
      throw MleDivergence(family.name() + ": singular covariance in Newton");

    double step = 1.0;
    Vector candidate = theta + direction;
    Vector cand_residual = phibar - family.mean_param(candidate);
    while (cand_residual.norm() >= res_norm && step > 1e-14) {
      step *= 0.5;
      candidate = theta + step * direction;
      cand_residual = phibar - family.mean_param(candidate);
    }
    if (cand_residual.norm() >= res_norm) break;
    theta = candidate;
    residual = cand_residual;
    res_norm = residual.norm();
  }
  if (res_norm > options.tol)
    throw MleDivergence(family.name() + ": Newton residual " +
                        std::to_string(res_norm) + " above tolerance after " +
                        std::to_string(iter) + " iterations");
  return {theta, iter, res_norm};
}

MleResult mle(const Family& family, const Matrix& data,
              const MleOptions& options) {
  return mle(family, family.mean_suff_stat(data), options);
}

}  // namespace cdlab
