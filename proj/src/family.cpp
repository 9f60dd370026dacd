#include "cdlab/family.hpp"

namespace cdlab {

Vector Family::suff_stat(const Vector& x) const {
  Vector phi(dim());
  suff_stat(x, phi);
  return phi;
}

Matrix Family::sample_data(const Vector& theta, int n,
                           std::uint64_t seed) const {
  Matrix data(state_dim(), n);
  Vector x(state_dim());
  Rng rng(seed, stream::data);
  for (int i = 0; i < n; ++i) {
    sample_state(theta, rng, x);
    data.col(i) = x;
  }
  return data;
}

Vector Family::mean_suff_stat(const Matrix& data) const {
  const int n = static_cast<int>(data.cols());
  Vector sum = Vector::Zero(dim());
  Vector phi(dim());
  for (int i = 0; i < n; ++i) {
    suff_stat(data.col(i), phi);
    sum += phi;
  }
  return sum / n;
}

double Family::log_likelihood(const Matrix& data, const Vector& theta) const {
  const int n = static_cast<int>(data.cols());
  double carrier = 0.0;
  for (int i = 0; i < n; ++i) carrier += log_carrier(data.col(i));
  return carrier / n + theta.dot(mean_suff_stat(data)) - cumulant(theta);
}

Vector Family::exact_gradient(const Vector& phibar,
                              const Vector& theta) const {
  return phibar - mean_param(theta);
}

}  // namespace cdlab
