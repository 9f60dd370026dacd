#include "cdlab/cd.hpp"

#include <stdexcept>

namespace cdlab {
namespace {

// Packed-state CD gradient for the RBM Gibbs kernel.  Chain states are bit
// patterns and the statistic sums are integer counts, so the result is
// bit-identical to the generic path (both draw the same uniforms in the same
// order and sum the same exact integers).
Vector cd_gradient_packed(const RbmGibbsKernel& kernel,
                          const std::vector<std::uint32_t>& data_states,
                          const Vector& phibar, const Vector& theta, int m,
                          std::uint64_t seed, std::uint64_t step) {
  const auto tables = kernel.tables(theta);
  const int nv = tables.nv;
  const int nh = tables.nh;
  const int d = nv * nh;
  std::vector<long long> counts(d, 0);
  const std::size_t n = data_states.size();
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(seed, stream::chain, step, i);
    std::uint32_t state = data_states[i];
    for (int s = 0; s < m; ++s)
      state = RbmGibbsKernel::step_packed(tables, state, rng);
    const std::uint32_t v = state & ((1u << nv) - 1u);
    const std::uint32_t h = state >> nv;
    for (int i2 = 0; i2 < nh; ++i2) {
      if (!((h >> i2) & 1u)) continue;
      for (int j = 0; j < nv; ++j) counts[i2 * nv + j] += (v >> j) & 1u;
    }
  }
  Vector g(d);
  for (int k = 0; k < d; ++k)
    g[k] = phibar[k] - static_cast<double>(counts[k]) / n;
  return g;
}

std::vector<std::uint32_t> pack_states(const Matrix& data) {
  std::vector<std::uint32_t> packed(data.cols());
  for (int i = 0; i < data.cols(); ++i) {
    std::uint32_t s = 0;
    for (int k = 0; k < data.rows(); ++k)
      if (data(k, i) > 0.5) s |= 1u << k;
    packed[i] = s;
  }
  return packed;
}

}  // namespace

Vector cd_gradient(const Family& family, const Kernel& kernel,
                   const Matrix& data, const Vector& phibar,
                   const Vector& theta, int m, std::uint64_t seed,
                   std::uint64_t step) {
  if (data.cols() < 1) throw std::invalid_argument("cd_gradient: empty data");
  if (m < 1) throw std::invalid_argument("cd_gradient: m must be >= 1");
  if (const auto* rbm = dynamic_cast<const RbmGibbsKernel*>(&kernel))
    return cd_gradient_packed(*rbm, pack_states(data), phibar, theta, m, seed,
                              step);

  const int n = static_cast<int>(data.cols());
  auto stepper = kernel.make_stepper(theta);
  Vector x(family.state_dim());
  Vector phi(family.dim());
  Vector sum = Vector::Zero(family.dim());
  for (int i = 0; i < n; ++i) {
    Rng rng(seed, stream::chain, step, static_cast<std::uint64_t>(i));
    x = data.col(i);
    for (int s = 0; s < m; ++s) stepper->step(x, rng);
    family.suff_stat(x, phi);
    sum += phi;
  }
  return phibar - sum / n;
}

Vector cd_gradient(const Family& family, const Kernel& kernel,
                   const Matrix& data, const Vector& theta, int m,
                   std::uint64_t seed, std::uint64_t step) {
  return cd_gradient(family, kernel, data, family.mean_suff_stat(data), theta,
                     m, seed, step);
}

Vector cd_update(const Vector& theta, const Vector& g_cd, double eta,
                 const ParamDomain& domain, bool projection) {
  Vector next = theta + eta * g_cd;
  if (projection) next = domain.project(next);
  return next;
}

Trajectory run_cd(const Family& family, const Kernel& kernel,
                  const Matrix& data, const CdConfig& config) {
  if (config.eta <= 0.0) throw std::invalid_argument("run_cd: eta must be > 0");
  if (config.m < 1) throw std::invalid_argument("run_cd: m must be >= 1");
  if (config.steps < 0)
    throw std::invalid_argument("run_cd: steps must be >= 0");
  if (config.theta0.size() != family.dim())
    throw std::invalid_argument("run_cd: theta0 dimension mismatch");
  if (config.domain.dim() > 0 && !config.domain.contains(config.theta0))
    throw std::invalid_argument("run_cd: theta0 outside the domain");

  const Vector phibar = family.mean_suff_stat(data);
  const auto* rbm = dynamic_cast<const RbmGibbsKernel*>(&kernel);
  const std::vector<std::uint32_t> packed =
      rbm ? pack_states(data) : std::vector<std::uint32_t>{};

  Trajectory traj;
  traj.config = config;
  traj.thetas.reserve(config.steps + 1);
  traj.cd_grads.reserve(config.steps);
  traj.thetas.push_back(config.theta0);

  Vector theta = config.theta0;
  for (int t = 0; t < config.steps; ++t) {
    const Vector g =
        rbm ? cd_gradient_packed(*rbm, packed, phibar, theta, config.m,
                                 config.seed, static_cast<std::uint64_t>(t))
            : cd_gradient(family, kernel, data, phibar, theta, config.m,
                          config.seed, static_cast<std::uint64_t>(t));
    Vector next = theta + config.eta * g;
    if (config.projection) {
      Vector clamped = config.domain.project(next);
      if ((clamped.array() != next.array()).any()) ++traj.clamped_steps;
      next = std::move(clamped);
    }
    theta = std::move(next);
    traj.thetas.push_back(theta);
    traj.cd_grads.push_back(g);
  }
  return traj;
}

Vector ergodic_average(const Trajectory& traj, int burn_in) {
  const int steps = static_cast<int>(traj.thetas.size()) - 1;
  if (burn_in >= steps)
    throw std::invalid_argument("ergodic_average: burn_in must be < steps");
  if (burn_in < 0) throw std::invalid_argument("ergodic_average: burn_in < 0");
  Vector sum = Vector::Zero(traj.thetas.front().size());
  for (int t = burn_in + 1; t <= steps; ++t) sum += traj.thetas[t];
  return sum / (steps - burn_in);
}

}  // namespace cdlab
