#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

#include "cdlab/family.hpp"

namespace cdlab {
namespace {

class GaussianMeanFamily final : public Family {
 public:
  GaussianMeanFamily(Matrix sigma0, double stat_bound_c)
      : sigma0_(std::move(sigma0)), stat_bound_c_(stat_bound_c) {
    if (sigma0_.rows() != sigma0_.cols())
      throw std::invalid_argument("gaussian_mean: Sigma0 must be square");
    if (!sigma0_.isApprox(sigma0_.transpose(), 1e-12))
      throw std::invalid_argument("gaussian_mean: Sigma0 must be symmetric");
    Eigen::LLT<Matrix> llt(sigma0_);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument(
          "gaussian_mean: Sigma0 must be positive definite");
    chol_ = llt.matrixL();
    sigma0_inv_ = llt.solve(Matrix::Identity(dim(), dim()));
    // log det via the Cholesky factor.
    log_det_ = 2.0 * chol_.diagonal().array().log().sum();
  }

  const std::string& name() const override {
    static const std::string n = "gaussian_mean";
    return n;
  }
  int dim() const override { return static_cast<int>(sigma0_.rows()); }
  int state_dim() const override { return dim(); }

  double log_carrier(const Vector& x) const override {
    const double quad = x.dot(sigma0_inv_ * x);
    return -0.5 * (dim() * std::log(2.0 * std::numbers::pi) + log_det_ + quad);
  }

  void suff_stat(const Vector& x, Vector& phi) const override { phi = x; }

  double cumulant(const Vector& theta) const override {
    return 0.5 * theta.dot(sigma0_ * theta);
  }

  Vector mean_param(const Vector& theta) const override {
    return sigma0_ * theta;
  }

  Matrix covariance(const Vector&) const override { return sigma0_; }

  void sample_state(const Vector& theta, Rng& rng, Vector& x) const override {
    for (int j = 0; j < dim(); ++j) x[j] = rng.normal();
    x = sigma0_ * theta + chol_ * x;
  }

  double stat_bound() const override { return stat_bound_c_; }
  bool stat_bound_exact() const override { return false; }

  ParamDomain default_domain() const override {
    return ParamDomain::cube(dim(), -4.0, 4.0);
  }

  const Matrix& sigma0() const { return sigma0_; }

 private:
  Matrix sigma0_;
  Matrix sigma0_inv_;
  Matrix chol_;
  double log_det_ = 0.0;
  double stat_bound_c_;
};

}  // namespace

std::unique_ptr<Family> make_gaussian_mean(const Matrix& sigma0,
                                           double stat_bound_c) {
  return std::make_unique<GaussianMeanFamily>(sigma0, stat_bound_c);
}

}  // namespace cdlab
