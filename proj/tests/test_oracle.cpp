#include <doctest.h>

#include <cmath>
#include <vector>

#include "cdlab/cd.hpp"
#include "cdlab/oracle.hpp"
#include "cdlab/spectral.hpp"
#include "support.hpp"

using namespace cdlab;

namespace {

Vector random_theta(Rng& rng, int d, double half_width) {
  Vector t(d);
  for (int j = 0; j < d; ++j)
    t(j) = half_width * (2.0 * rng.uniform01() - 1.0);
  return t;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("exact distribution is normalized and uniform at zero") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    REQUIRE(table.count() == 16);
    const Vector p0 = table.exact_distribution(Vector::Zero(4));
    for (int i = 0; i < 16; ++i)
      CHECK(p0(i) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    Rng rng(33001);
    for (int k = 0; k < 10; ++k) {
      const Vector p = table.exact_distribution(random_theta(rng, 4, 3.0));
      CHECK(std::abs(p.sum() - 1.0) < 1e-14);
      CHECK(p.minCoeff() > 0.0);
    }
  }

  TEST_CASE("states with equal statistics carry equal probability") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    Rng rng(33002);
    const Vector theta = random_theta(rng, 4, 2.0);
    const Vector p = table.exact_distribution(theta);
    int matched_pairs = 0;
    for (int i = 0; i < 16; ++i)
      for (int j = i + 1; j < 16; ++j)
        if ((table.stats().col(i) - table.stats().col(j)).norm() == 0.0) {
          CHECK(p(i) == doctest::Approx(p(j)).epsilon(1e-14));
          ++matched_pairs;
        }
    CHECK(matched_pairs > 0);  // e.g. all states with h = 0 share phi = 0
  }

  TEST_CASE("distribution at w=0.5 matches an independent evaluation") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    const Vector theta = Vector::Constant(4, 0.5);
    const Vector p = table.exact_distribution(theta);
    double z = 0.0;
    std::vector<double> weights(16);
    for (int s = 0; s < 16; ++s) {
      const int v1 = s & 1, v2 = (s >> 1) & 1, h1 = (s >> 2) & 1,
                h2 = (s >> 3) & 1;
      weights[s] = std::exp(0.5 * (h1 * v1 + h1 * v2 + h2 * v1 + h2 * v2));
      z += weights[s];
    }
    for (int s = 0; s < 16; ++s)
      CHECK(p(s) == doctest::Approx(weights[s] / z).epsilon(1e-13));
  }

  TEST_CASE("table moments agree with the family") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    Rng rng(33003);
    for (int k = 0; k < 10; ++k) {
      const Vector theta = random_theta(rng, 4, 2.5);
      CHECK(table.cumulant(theta) ==
            doctest::Approx(fam->cumulant(theta)).epsilon(1e-12));
      CHECK((table.mean_param(theta) - fam->mean_param(theta)).norm() <
            1e-12);
      CHECK((table.covariance(theta) - fam->covariance(theta)).norm() <
            1e-12);
    }
  }

  TEST_CASE("state indexing is the packed-bit order") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    for (int i = 0; i < 16; ++i) {
      CHECK(table.state_index(table.states().col(i)) == i);
      for (int k = 0; k < 4; ++k)
        CHECK(table.states()(k, i) == ((i >> k) & 1));
    }
  }

  TEST_CASE("cd gradient mean at zero weights is phibar minus a quarter") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    RbmGibbsKernel kernel(2, 2);
    const Matrix data = fam->sample_data(Vector::Constant(4, 0.4), 50, 33);
    const Vector phibar = fam->mean_suff_stat(data);
    const Vector expect = phibar - Vector::Constant(4, 0.25);
    for (int m : {1, 2, 5})
      CHECK((table.exact_cd_gradient_mean(kernel, Vector::Zero(4), data, m) -
             expect)
                .norm() < 1e-13);
  }

  TEST_CASE("exact resample semantics reduce to the exact gradient") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    ExactResampleKernel kernel(*fam);
    const Matrix data = fam->sample_data(Vector::Constant(4, 0.5), 60, 34);
    const Vector phibar = fam->mean_suff_stat(data);
    Rng rng(33004);
    for (int k = 0; k < 5; ++k) {
      const Vector theta = random_theta(rng, 4, 2.0);
      const Vector a = table.exact_cd_gradient_mean(kernel, theta, data, 3);
      const Vector b = fam->exact_gradient(phibar, theta);
      CHECK((a - b).norm() < 1e-12);
    }
  }

  TEST_CASE("monte carlo mean of the cd gradient matches the enumeration") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    RbmGibbsKernel kernel(2, 2);
    const Matrix data = fam->sample_data(Vector::Constant(4, 0.5), 20, 35);
    const Vector phibar = fam->mean_suff_stat(data);
    Rng rng(33005);
    const Vector theta = random_theta(rng, 4, 1.5);
    const int m = 3;
    const Vector exact = table.exact_cd_gradient_mean(kernel, theta, data, m);
    const int reps = 3000;
    Vector sum = Vector::Zero(4), sum_sq = Vector::Zero(4);
    for (int r = 0; r < reps; ++r) {
      const Vector g = cd_gradient(*fam, kernel, data, phibar, theta, m,
                                   derive_stream(33006, stream::replicate, r));
      sum += g;
      sum_sq += g.cwiseProduct(g);
    }
    const Vector mean = sum / double(reps);
    for (int j = 0; j < 4; ++j) {
      const double var =
          (sum_sq(j) / reps - mean(j) * mean(j)) * reps / (reps - 1.0);
      const double se = std::sqrt(var / reps);
      CHECK(std::abs(mean(j) - exact(j)) < 4.0 * se + 1e-12);
    }
  }

  TEST_CASE("cd gradient mean approaches the exact gradient geometrically") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    RbmGibbsKernel kernel(2, 2);
    const Matrix data = fam->sample_data(Vector::Constant(4, 0.5), 40, 36);
    const Vector phibar = fam->mean_suff_stat(data);
    Rng rng(33007);
    for (int k = 0; k < 10; ++k) {
      const Vector theta = random_theta(rng, 4, 1.0);
      const double alpha =
          spectral_alpha_dense(kernel.transition_matrix(theta));
      const Vector g = fam->exact_gradient(phibar, theta);
      std::vector<double> err;
      for (int m = 1; m <= 9; ++m)
        err.push_back(
            (table.exact_cd_gradient_mean(kernel, theta, data, m) - g)
                .norm());
      CHECK(err[8] < err[0]);
      for (int m = 5; m <= 7; ++m) {
        if (err[m - 1] < 1e-13) continue;  // already at the target
        CHECK(err[m + 1] / err[m - 1] <= alpha * alpha + 0.05);
      }
    }
  }

  TEST_CASE("the update lattice spacing is eta over n") {
    auto fam = make_binary_rbm(2, 2);
    const StateTable table(*fam);
    const Matrix data = fam->sample_data(Vector::Zero(4), 25, 37);
    const LatticeSpec spec = exact_cd_gradient_support(table, data, 0.2);
    CHECK(spec.spacing == doctest::Approx(0.2 / 25.0).epsilon(1e-15));
  }

  TEST_CASE("matrix power is plain repeated multiplication") {
    auto fam = make_binary_rbm(2, 2);
    RbmGibbsKernel kernel(2, 2);
    const Matrix p =
        kernel.transition_matrix(Vector::Constant(4, 0.6)).P;
    CHECK(matrix_power(p, 0).isIdentity(1e-15));
    CHECK((matrix_power(p, 1) - p).norm() == 0.0);
    CHECK((matrix_power(p, 3) - p * p * p).norm() < 1e-15);
    CHECK_THROWS_AS(matrix_power(p, -1), std::invalid_argument);
  }

  TEST_CASE("oversized enumerations are refused") {
    CHECK_THROWS_AS(make_binary_rbm(11, 11), std::invalid_argument);
  }
}
