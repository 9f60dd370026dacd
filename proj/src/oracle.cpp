#include "cdlab/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace cdlab {

StateTable::StateTable(const Family& family) : family_(&family) {
  count_ = family.enumerable_states();
  if (count_ <= 0)
    throw std::invalid_argument("StateTable: family is not enumerable");
  if (count_ > (1 << 20))
    throw std::invalid_argument("StateTable: enumeration capped at 2^20");
  const int p = family.state_dim();
  states_.resize(p, count_);
  stats_.resize(family.dim(), count_);
  Vector x(p), phi(family.dim());
  for (int s = 0; s < count_; ++s) {
    for (int k = 0; k < p; ++k) x[k] = (s >> k) & 1;
    family.suff_stat(x, phi);
    states_.col(s) = x;
    stats_.col(s) = phi;
  }
}

int StateTable::state_index(const Vector& x) const {
  int s = 0;
  for (int k = 0; k < x.size(); ++k)
    if (x[k] > 0.5) s |= 1 << k;
  return s;
}

Vector StateTable::exact_distribution(const Vector& theta) const {
  Vector logits(count_);
  for (int s = 0; s < count_; ++s)
    logits[s] = family_->log_carrier(states_.col(s)) +
                theta.dot(stats_.col(s));
  const double shift = logits.maxCoeff();
  Vector probs = (logits.array() - shift).exp();
  return probs / probs.sum();
}

double StateTable::cumulant(const Vector& theta) const {
  Vector logits(count_);
  for (int s = 0; s < count_; ++s)
    logits[s] = family_->log_carrier(states_.col(s)) +
                theta.dot(stats_.col(s));
  const double shift = logits.maxCoeff();
  return shift + std::log((logits.array() - shift).exp().sum());
}

Vector StateTable::mean_param(const Vector& theta) const {
  return stats_ * exact_distribution(theta);
}

Matrix StateTable::covariance(const Vector& theta) const {
  const Vector p = exact_distribution(theta);
  const Vector mu = stats_ * p;
  return stats_ * p.asDiagonal() * stats_.transpose() - mu * mu.transpose();
}

TransitionMatrix StateTable::gibbs_transition_matrix(const Vector& theta,
                                                     int nv, int nh) const {
  if (count_ != (1 << (nv + nh)))
    throw std::invalid_argument("gibbs_transition_matrix: unit counts do not "
                                "match the state space");
  const Vector joint = exact_distribution(theta);
  const int v_states = 1 << nv;
  const int h_states = 1 << nh;

  // Marginal of v and block conditionals straight from the joint law.
  Vector pv_marginal = Vector::Zero(v_states);
  for (int s = 0; s < count_; ++s) pv_marginal[s & (v_states - 1)] += joint[s];
  Matrix h_given_v(h_states, v_states);  // (h, v) -> p(h | v)
  for (int s = 0; s < count_; ++s) {
    const int v = s & (v_states - 1);
    const int h = s >> nv;
    h_given_v(h, v) = joint[s] / pv_marginal[v];
  }
  Vector ph_marginal = Vector::Zero(h_states);
  for (int s = 0; s < count_; ++s) ph_marginal[s >> nv] += joint[s];
  Matrix v_given_h(v_states, h_states);
  for (int s = 0; s < count_; ++s) {
    const int v = s & (v_states - 1);
    const int h = s >> nv;
    v_given_h(v, h) = joint[s] / ph_marginal[h];
  }

  Matrix update_h = Matrix::Zero(count_, count_);
  Matrix update_v = Matrix::Zero(count_, count_);
  for (int s = 0; s < count_; ++s) {
    const int v = s & (v_states - 1);
    const int h = s >> nv;
    for (int h2 = 0; h2 < h_states; ++h2)
      update_h(s, v | (h2 << nv)) = h_given_v(h2, v);
    for (int v2 = 0; v2 < v_states; ++v2)
      update_v(s, v2 | (h << nv)) = v_given_h(v2, h);
  }
  return {update_h * update_v, joint};
}

Matrix matrix_power(const Matrix& p, int m) {
  if (m < 0) throw std::invalid_argument("matrix_power: negative exponent");
  Matrix result = Matrix::Identity(p.rows(), p.cols());
  for (int s = 0; s < m; ++s) result = result * p;
  return result;
}

Vector StateTable::exact_cd_gradient_mean(const Kernel& kernel,
                                          const Vector& theta,
                                          const Matrix& data, int m) const {
  if (m < 1)
    throw std::invalid_argument("exact_cd_gradient_mean: m must be >= 1");
  const TransitionMatrix tm = kernel.transition_matrix(theta);
  const Matrix pm = matrix_power(tm.P, m);
  // Column s of chain_mean is E[phi(X_m) | X_0 = state s].
  const Matrix chain_mean = stats_ * pm.transpose();
  const int n = static_cast<int>(data.cols());
  Vector phibar = Vector::Zero(family_->dim());
  Vector chain = Vector::Zero(family_->dim());
  for (int i = 0; i < n; ++i) {
    const int s = state_index(data.col(i));
    phibar += stats_.col(s);
    chain += chain_mean.col(s);
  }
  return (phibar - chain) / n;
}

LatticeSpec exact_cd_gradient_support(const StateTable& table,
                                      const Matrix& data, double eta) {
  const Matrix& phi = table.stats();
  for (int s = 0; s < phi.cols(); ++s)
    for (int k = 0; k < phi.rows(); ++k)
      if (phi(k, s) != 0.0 && phi(k, s) != 1.0)
        throw std::invalid_argument(
            "exact_cd_gradient_support: statistics must be {0,1}-valued");
  return {eta / static_cast<double>(data.cols())};
}

}  // namespace cdlab
