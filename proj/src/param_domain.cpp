#include "cdlab/param_domain.hpp"

#include <stdexcept>

namespace cdlab {

ParamDomain::ParamDomain(Vector lo, Vector hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size())
    throw std::invalid_argument("ParamDomain: bound dimensions differ");
  for (int j = 0; j < lower.size(); ++j)
    if (!(lower[j] < upper[j]))
      throw std::invalid_argument(
          "ParamDomain: lower bound must be strictly below upper bound");
}

ParamDomain ParamDomain::cube(int dim, double lo, double hi) {
  return ParamDomain(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

bool ParamDomain::contains(const Vector& theta, double tol) const {
  for (int j = 0; j < lower.size(); ++j)
    if (theta[j] < lower[j] - tol || theta[j] > upper[j] + tol) return false;
  return true;
}

bool ParamDomain::strictly_contains(const Vector& theta) const {
  for (int j = 0; j < lower.size(); ++j)
    if (theta[j] <= lower[j] || theta[j] >= upper[j]) return false;
  return true;
}

Vector ParamDomain::project(const Vector& theta) const {
  return theta.cwiseMax(lower).cwiseMin(upper);
}

Vector ParamDomain::sample(Rng& rng) const {
  Vector out(lower.size());
  for (int j = 0; j < lower.size(); ++j)
    out[j] = lower[j] + (upper[j] - lower[j]) * rng.uniform01();
  return out;
}

std::vector<Vector> ParamDomain::grid(int points_per_dim) const {
  if (points_per_dim < 2)
    throw std::invalid_argument("ParamDomain::grid: need at least 2 points");
  const int d = dim();
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= points_per_dim;
  std::vector<Vector> points;
  points.reserve(total);
  std::vector<int> idx(d, 0);
  Vector theta(d);
  for (std::size_t k = 0; k < total; ++k) {
    for (int j = 0; j < d; ++j)
      theta[j] = lower[j] +
                 (upper[j] - lower[j]) * idx[j] / (points_per_dim - 1);
    points.push_back(theta);
    for (int j = d - 1; j >= 0; --j) {
      if (++idx[j] < points_per_dim) break;
      idx[j] = 0;
    }
  }
  return points;
}

}  // namespace cdlab
