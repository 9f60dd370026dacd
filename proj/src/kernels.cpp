#include "cdlab/kernels.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace cdlab {
namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Exact p_theta over packed binary states, via log-sum-exp.
Vector enumerate_binary_distribution(const Family& family,
                                     const Vector& theta) {
  const int states = family.enumerable_states();
  const int p = family.state_dim();
  Vector logits(states);
  Vector x(p), phi(family.dim());
  for (int s = 0; s < states; ++s) {
    for (int k = 0; k < p; ++k) x[k] = (s >> k) & 1;
    family.suff_stat(x, phi);
    logits[s] = family.log_carrier(x) + theta.dot(phi);
  }
  const double shift = logits.maxCoeff();
  Vector probs = (logits.array() - shift).exp();
  return probs / probs.sum();
}

}  // namespace

void Kernel::kernel_step(const Vector& theta, Vector& x, Rng& rng) const {
  make_stepper(theta)->step(x, rng);
}

void Kernel::m_step(const Vector& theta, Vector& x, int m, Rng& rng) const {
  if (m < 1) throw std::invalid_argument("m_step: m must be at least 1");
  auto stepper = make_stepper(theta);
  for (int s = 0; s < m; ++s) stepper->step(x, rng);
}

TransitionMatrix Kernel::transition_matrix(const Vector&) const {
  throw UnsupportedKernelOp(name() + ": no exact transition matrix");
}

Vector Kernel::exact_conditional_mean(const Vector&, const Vector&,
                                      int) const {
  throw UnsupportedKernelOp(name() + ": no closed-form conditional mean");
}

// ---- RBM systematic-scan Gibbs ---------------------------------------------

RbmGibbsKernel::RbmGibbsKernel(int nv, int nh) : nv_(nv), nh_(nh) {
  if (nv < 1 || nh < 1)
    throw std::invalid_argument("rbm_gibbs: unit counts must be positive");
  if (nv + nh > 20)
    throw std::invalid_argument("rbm_gibbs: enumeration capped at 2^20");
}

const std::string& RbmGibbsKernel::name() const {
  static const std::string n = "rbm_gibbs";
  return n;
}

RbmGibbsKernel::Tables RbmGibbsKernel::tables(const Vector& theta) const {
  Tables t;
  t.nv = nv_;
  t.nh = nh_;
  t.p_hidden.resize(static_cast<std::size_t>(1 << nv_) * nh_);
  t.p_visible.resize(static_cast<std::size_t>(1 << nh_) * nv_);
  for (int v = 0; v < (1 << nv_); ++v)
    for (int i = 0; i < nh_; ++i) {
      double a = 0.0;
      for (int j = 0; j < nv_; ++j)
        if (v & (1 << j)) a += theta[i * nv_ + j];
      t.p_hidden[static_cast<std::size_t>(v) * nh_ + i] = sigmoid(a);
    }
  for (int h = 0; h < (1 << nh_); ++h)
    for (int j = 0; j < nv_; ++j) {
      double a = 0.0;
      for (int i = 0; i < nh_; ++i)
        if (h & (1 << i)) a += theta[i * nv_ + j];
      t.p_visible[static_cast<std::size_t>(h) * nv_ + j] = sigmoid(a);
    }
  return t;
}

std::uint32_t RbmGibbsKernel::step_packed(const Tables& t, std::uint32_t state,
                                          Rng& rng) {
  const std::uint32_t v_mask = (1u << t.nv) - 1u;
  std::uint32_t v = state & v_mask;
  std::uint32_t h = 0;
  const double* ph = &t.p_hidden[static_cast<std::size_t>(v) * t.nh];
  for (int i = 0; i < t.nh; ++i)
    if (rng.uniform01() < ph[i]) h |= 1u << i;
  std::uint32_t v2 = 0;
  const double* pv = &t.p_visible[static_cast<std::size_t>(h) * t.nv];
  for (int j = 0; j < t.nv; ++j)
    if (rng.uniform01() < pv[j]) v2 |= 1u << j;
  return v2 | (h << t.nv);
}

namespace {
class RbmGibbsStepper final : public Stepper {
 public:
  explicit RbmGibbsStepper(RbmGibbsKernel::Tables t) : t_(std::move(t)) {}

  void step(Vector& x, Rng& rng) const override {
    std::uint32_t v = 0;
    for (int j = 0; j < t_.nv; ++j)
      if (x[j] != 0.0) v |= 1u << j;
    const double* ph = &t_.p_hidden[static_cast<std::size_t>(v) * t_.nh];
    std::uint32_t h = 0;
    for (int i = 0; i < t_.nh; ++i) {
      const bool on = rng.uniform01() < ph[i];
      x[t_.nv + i] = on ? 1.0 : 0.0;
      if (on) h |= 1u << i;
    }
    const double* pv = &t_.p_visible[static_cast<std::size_t>(h) * t_.nv];
    for (int j = 0; j < t_.nv; ++j) x[j] = rng.uniform01() < pv[j] ? 1.0 : 0.0;
  }

 private:
  RbmGibbsKernel::Tables t_;
};
}  // namespace

std::unique_ptr<Stepper> RbmGibbsKernel::make_stepper(
    const Vector& theta) const {
  return std::make_unique<RbmGibbsStepper>(tables(theta));
}

TransitionMatrix RbmGibbsKernel::transition_matrix(const Vector& theta) const {
  const Tables t = tables(theta);
  const int states = 1 << (nv_ + nh_);
  const std::uint32_t v_mask = (1u << nv_) - 1u;
  // Block updates as exact row-stochastic factors: first all hidden units
  // given v, then all visible units given h.
  Matrix ph_mat = Matrix::Zero(states, states);
  Matrix pv_mat = Matrix::Zero(states, states);
  for (int s = 0; s < states; ++s) {
    const std::uint32_t v = s & v_mask;
    const std::uint32_t h = static_cast<std::uint32_t>(s) >> nv_;
    for (std::uint32_t h2 = 0; h2 < (1u << nh_); ++h2) {
      double prob = 1.0;
      for (int i = 0; i < nh_; ++i) {
        const double p1 = t.p_hidden[static_cast<std::size_t>(v) * nh_ + i];
        prob *= (h2 & (1u << i)) ? p1 : 1.0 - p1;
      }
      ph_mat(s, v | (h2 << nv_)) = prob;
    }
    for (std::uint32_t v2 = 0; v2 < (1u << nv_); ++v2) {
      double prob = 1.0;
      for (int j = 0; j < nv_; ++j) {
        const double p1 = t.p_visible[static_cast<std::size_t>(h) * nv_ + j];
        prob *= (v2 & (1u << j)) ? p1 : 1.0 - p1;
      }
      pv_mat(s, v2 | (h << nv_)) = prob;
    }
  }
  TransitionMatrix tm;
  tm.P = ph_mat * pv_mat;
  const auto family = make_binary_rbm(nv_, nh_);
  tm.pi = enumerate_binary_distribution(*family, theta);
  return tm;
}

// ---- Gaussian systematic-scan Gibbs ----------------------------------------

GaussianGibbsKernel::GaussianGibbsKernel(const Matrix& sigma0)
    : sigma0_(sigma0) {
  const int p = static_cast<int>(sigma0.rows());
  Eigen::LLT<Matrix> llt(sigma0_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("gaussian_gibbs: Sigma0 not positive definite");
  const Matrix precision = llt.solve(Matrix::Identity(p, p));
  cond_sd_.resize(p);
  cond_coef_ = Matrix::Zero(p, p);
  for (int j = 0; j < p; ++j) {
    cond_sd_[j] = std::sqrt(1.0 / precision(j, j));
    for (int k = 0; k < p; ++k)
      if (k != j) cond_coef_(j, k) = -precision(j, k) / precision(j, j);
  }
  // Compose the per-coordinate affine updates into the one-sweep contraction.
  sweep_ = Matrix::Identity(p, p);
  for (int j = 0; j < p; ++j) {
    Matrix update = Matrix::Identity(p, p);
    update.row(j) = cond_coef_.row(j);
    sweep_ = update * sweep_;
  }
}

const std::string& GaussianGibbsKernel::name() const {
  static const std::string n = "gaussian_gibbs";
  return n;
}

namespace {
class GaussianGibbsStepper final : public Stepper {
 public:
  GaussianGibbsStepper(Vector mu, const Matrix& coef, const Vector& sd)
      : mu_(std::move(mu)), coef_(coef), sd_(sd) {}

  void step(Vector& x, Rng& rng) const override {
    const int p = static_cast<int>(mu_.size());
    for (int j = 0; j < p; ++j) {
      double mean = mu_[j];
      for (int k = 0; k < p; ++k)
        if (k != j) mean += coef_(j, k) * (x[k] - mu_[k]);
      x[j] = mean + sd_[j] * rng.normal();
    }
  }

 private:
  Vector mu_;
  const Matrix& coef_;
  const Vector& sd_;
};
}  // namespace

std::unique_ptr<Stepper> GaussianGibbsKernel::make_stepper(
    const Vector& theta) const {
  return std::make_unique<GaussianGibbsStepper>(sigma0_ * theta, cond_coef_,
                                                cond_sd_);
}

Vector GaussianGibbsKernel::exact_conditional_mean(const Vector& theta,
                                                   const Vector& x,
                                                   int m) const {
  if (m < 1) throw std::invalid_argument("exact_conditional_mean: m >= 1");
  const Vector mu = sigma0_ * theta;
  Vector centered = x - mu;
  for (int s = 0; s < m; ++s) centered = sweep_ * centered;
  return mu + centered;
}

// ---- Exact resampling -------------------------------------------------------

ExactResampleKernel::ExactResampleKernel(const Family& family)
    : family_(&family) {}

const std::string& ExactResampleKernel::name() const {
  static const std::string n = "exact_resample";
  return n;
}

namespace {
class ExactResampleStepper final : public Stepper {
 public:
  ExactResampleStepper(const Family& family, Vector theta)
      : family_(&family), theta_(std::move(theta)) {}

  void step(Vector& x, Rng& rng) const override {
    family_->sample_state(theta_, rng, x);
  }

 private:
  const Family* family_;
  Vector theta_;
};
}  // namespace

std::unique_ptr<Stepper> ExactResampleKernel::make_stepper(
    const Vector& theta) const {
  return std::make_unique<ExactResampleStepper>(*family_, theta);
}

bool ExactResampleKernel::has_transition_matrix() const {
  return family_->enumerable_states() > 0;
}

TransitionMatrix ExactResampleKernel::transition_matrix(
    const Vector& theta) const {
  if (!has_transition_matrix())
    throw UnsupportedKernelOp("exact_resample: family not enumerable");
  TransitionMatrix tm;
  tm.pi = enumerate_binary_distribution(*family_, theta);
  tm.P = Vector::Ones(tm.pi.size()) * tm.pi.transpose();
  return tm;
}

Vector ExactResampleKernel::exact_conditional_mean(const Vector& theta,
                                                   const Vector&,
                                                   int m) const {
  if (m < 1) throw std::invalid_argument("exact_conditional_mean: m >= 1");
  return family_->mean_param(theta);
}

}  // namespace cdlab
