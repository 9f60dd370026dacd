#include "cdlab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace cdlab {
namespace {

void require_stochastic(const TransitionMatrix& tm) {
  if (tm.P.rows() != tm.P.cols() || tm.P.rows() != tm.pi.size())
    throw std::invalid_argument("spectral_alpha: shape mismatch");
  if (tm.P.minCoeff() < -1e-14)
    throw std::invalid_argument("spectral_alpha: negative entries");
  const Vector row_sums = tm.P.rowwise().sum();
  if ((row_sums.array() - 1.0).abs().maxCoeff() > 1e-9)
    throw std::invalid_argument("spectral_alpha: rows do not sum to 1");
}

Matrix deflated(const TransitionMatrix& tm) {
  return tm.P - Vector::Ones(tm.pi.size()) * tm.pi.transpose();
}

}  // namespace

double spectral_alpha_dense(const TransitionMatrix& tm) {
  require_stochastic(tm);
  Eigen::EigenSolver<Matrix> solver(deflated(tm), /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_alpha_power(const TransitionMatrix& tm, double tol,
                            long max_iter) {
  require_stochastic(tm);
  const Matrix d = deflated(tm);
  const int n = static_cast<int>(d.rows());
  Rng rng(0xC0FFEEULL);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  v.normalize();

  // Successive norm ratios converge to the spectral radius; the geometric
  // mean of consecutive ratios also damps period-two oscillation from
  // complex eigenvalue pairs.
  double prev_ratio = -1.0;
  double estimate = 0.0;
  int stable = 0;
  Vector w(n);
  for (long it = 0; it < max_iter; ++it) {
    w.noalias() = d * v;
    const double r = w.norm();
    if (r < 1e-300) return 0.0;  // nilpotent direction: no second eigenvalue
    v = w / r;
    if (prev_ratio >= 0.0) {
      const double blended = std::sqrt(r * prev_ratio);
      if (std::abs(blended - estimate) <= tol * std::max(1.0, blended)) {
        if (++stable >= 5) return blended;
      } else {
        stable = 0;
      }
      estimate = blended;
    }
    prev_ratio = r;
  }
  return estimate;
}

AlphaPair spectral_alpha_both(const TransitionMatrix& tm) {
  return {spectral_alpha_dense(tm), spectral_alpha_power(tm)};
}

double spectral_alpha(const TransitionMatrix& tm) {
  if (tm.P.rows() <= 64) return spectral_alpha_dense(tm);
  return spectral_alpha_power(tm);
}

SpectralReport alpha_sup_over_grid(const Kernel& kernel,
                                   const ParamDomain& domain,
                                   int points_per_dim) {
  if (!kernel.has_transition_matrix())
    throw UnsupportedKernelOp(kernel.name() +
                              ": spectral grid needs an exact matrix");
  SpectralReport report;
  report.grid = domain.grid(points_per_dim);
  report.alpha_at.reserve(report.grid.size());
  for (const Vector& theta : report.grid) {
    const double alpha = spectral_alpha(kernel.transition_matrix(theta));
    report.alpha_at.push_back(alpha);
    report.alpha_sup = std::max(report.alpha_sup, alpha);
  }
  report.near_one = report.alpha_sup >= 1.0 - 1e-6;
  return report;
}

double gibbs_alpha_estimate(const Kernel& kernel, const Family& family,
                            const Vector& theta, long chain_length,
                            std::uint64_t seed) {
  if (chain_length < 1000)
    throw std::invalid_argument("gibbs_alpha_estimate: chain too short");
  constexpr long kBurnIn = 1000;
  constexpr int kMaxLag = 10;

  const int p = family.state_dim();
  Rng rng(seed, stream::chain);
  Vector x(p);
  family.sample_state(theta, rng, x);  // stationary start
  auto stepper = kernel.make_stepper(theta);
  for (long t = 0; t < kBurnIn; ++t) stepper->step(x, rng);

  Matrix samples(p, chain_length);
  for (long t = 0; t < chain_length; ++t) {
    stepper->step(x, rng);
    samples.col(t) = x;
  }

  double slowest = -1.0;
  for (int c = 0; c < p; ++c) {
    const Eigen::ArrayXd series =
        samples.row(c).array() - samples.row(c).mean();
    double acf[kMaxLag + 1];
    for (int lag = 0; lag <= kMaxLag; ++lag)
      acf[lag] = (series.head(chain_length - lag) *
                  series.tail(chain_length - lag))
                     .sum() /
                 chain_length;
    for (int lag = 0; lag <= kMaxLag; ++lag) acf[lag] /= acf[0];
    double num = 0.0, den = 0.0;
    for (int lag = 1; lag <= kMaxLag; ++lag) {
      num += acf[lag] * acf[lag - 1];
      den += acf[lag - 1] * acf[lag - 1];
    }
    slowest = std::max(slowest, num / den);
  }
  return slowest;
}

}  // namespace cdlab
