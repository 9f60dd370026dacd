#include <cmath>
#include <limits>
#include <vector>

#include "cdlab/family.hpp"

namespace cdlab {
namespace {

double softplus(double x) {
  if (x > 35.0) return x;
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Moments are computed by marginalizing the hidden layer analytically and
// enumerating visible configurations only: log p(v) ~ sum_i softplus(a_i(v))
// with a_i(v) the input to hidden unit i.  The oracle module independently
// enumerates the full joint space; the two routes cross-check each other.
class BinaryRbmFamily final : public Family {
 public:
  BinaryRbmFamily(int nv, int nh) : nv_(nv), nh_(nh) {
    if (nv < 1 || nh < 1)
      throw std::invalid_argument("binary_rbm: unit counts must be positive");
    if (nv + nh > 20)
      throw std::invalid_argument("binary_rbm: enumeration capped at 2^20");
  }

  const std::string& name() const override {
    static const std::string n = "binary_rbm";
    return n;
  }
  int dim() const override { return nv_ * nh_; }
  int state_dim() const override { return nv_ + nh_; }

  double log_carrier(const Vector&) const override { return 0.0; }

  void suff_stat(const Vector& x, Vector& phi) const override {
    for (int i = 0; i < nh_; ++i)
      for (int j = 0; j < nv_; ++j) phi[i * nv_ + j] = x[nv_ + i] * x[j];
  }

  double cumulant(const Vector& theta) const override {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> logw(visible_states());
    for (int v = 0; v < visible_states(); ++v) {
      logw[v] = log_weight(theta, v);
      best = std::max(best, logw[v]);
    }
    double sum = 0.0;
    for (double lw : logw) sum += std::exp(lw - best);
    return best + std::log(sum);
  }

  Vector mean_param(const Vector& theta) const override {
    const double lambda = cumulant(theta);
    Vector mu = Vector::Zero(dim());
    for (int v = 0; v < visible_states(); ++v) {
      const double w = std::exp(log_weight(theta, v) - lambda);
      for (int i = 0; i < nh_; ++i) {
        const double p_h = sigmoid(hidden_input(theta, i, v));
        for (int j = 0; j < nv_; ++j)
          if (v & (1 << j)) mu[i * nv_ + j] += w * p_h;
      }
    }
    return mu;
  }

  Matrix covariance(const Vector& theta) const override {
    const double lambda = cumulant(theta);
    const int d = dim();
    Vector mu = Vector::Zero(d);
    Matrix second = Matrix::Zero(d, d);
    Vector p_h(nh_);
    for (int v = 0; v < visible_states(); ++v) {
      const double w = std::exp(log_weight(theta, v) - lambda);
      for (int i = 0; i < nh_; ++i) p_h[i] = sigmoid(hidden_input(theta, i, v));
      for (int i = 0; i < nh_; ++i)
        for (int j = 0; j < nv_; ++j) {
          if (!(v & (1 << j))) continue;
          const int k = i * nv_ + j;
          mu[k] += w * p_h[i];
          for (int i2 = 0; i2 < nh_; ++i2)
            for (int j2 = 0; j2 < nv_; ++j2) {
              if (!(v & (1 << j2))) continue;
              // Hidden units are conditionally independent given v.
              const double joint = (i2 == i) ? p_h[i] : p_h[i] * p_h[i2];
              second(k, i2 * nv_ + j2) += w * joint;
            }
        }
    }
    return second - mu * mu.transpose();
  }

  void sample_state(const Vector& theta, Rng& rng, Vector& x) const override {
    // Draw v from its marginal, then each hidden unit from its conditional.
    const double lambda = cumulant(theta);
    double u = rng.uniform01();
    int v = visible_states() - 1;
    double acc = 0.0;
    for (int cand = 0; cand < visible_states(); ++cand) {
      acc += std::exp(log_weight(theta, cand) - lambda);
      if (u < acc) {
        v = cand;
        break;
      }
    }
    for (int j = 0; j < nv_; ++j) x[j] = (v >> j) & 1;
    for (int i = 0; i < nh_; ++i)
      x[nv_ + i] =
          rng.uniform01() < sigmoid(hidden_input(theta, i, v)) ? 1.0 : 0.0;
  }

  double stat_bound() const override { return 1.0; }
  bool stat_bound_exact() const override { return true; }

  bool moment_in_interior(const Vector& phibar) const override {
    for (int k = 0; k < phibar.size(); ++k)
      if (phibar[k] <= 0.0 || phibar[k] >= 1.0) return false;
    return true;
  }

  int enumerable_states() const override { return 1 << (nv_ + nh_); }

  ParamDomain default_domain() const override {
    return ParamDomain::cube(dim(), -3.0, 3.0);
  }

 private:
  int visible_states() const { return 1 << nv_; }

  double hidden_input(const Vector& theta, int i, int v) const {
    double a = 0.0;
    for (int j = 0; j < nv_; ++j)
      if (v & (1 << j)) a += theta[i * nv_ + j];
    return a;
  }

  double log_weight(const Vector& theta, int v) const {
    double lw = 0.0;
    for (int i = 0; i < nh_; ++i) lw += softplus(hidden_input(theta, i, v));
    return lw;
  }

  int nv_;
  int nh_;
};

}  // namespace

std::unique_ptr<Family> make_binary_rbm(int nv, int nh) {
  return std::make_unique<BinaryRbmFamily>(nv, nh);
}

}  // namespace cdlab
