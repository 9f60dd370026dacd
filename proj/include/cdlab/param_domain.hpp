#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cdlab/rng.hpp"

namespace cdlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Axis-aligned box of natural parameters.  Used both as the trajectory
// constraint set and as the region over which spectral/curvature constants
// are measured on a grid.
struct ParamDomain {
  Vector lower;
  Vector upper;

  ParamDomain() = default;
  ParamDomain(Vector lo, Vector hi);

  static ParamDomain cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& theta, double tol = 0.0) const;
  bool strictly_contains(const Vector& theta) const;
  Vector project(const Vector& theta) const;
  Vector sample(Rng& rng) const;

  // Tensor-product grid, points_per_dim per coordinate, lexicographic order
  // (last coordinate fastest).
  std::vector<Vector> grid(int points_per_dim) const;
};

}  // namespace cdlab
