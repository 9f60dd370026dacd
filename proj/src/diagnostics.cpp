#include "cdlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace cdlab {

bool CheckRecord::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

Json CheckRecord::to_json() const {
  Json j;
  j["check"] = check;
  j["inputs"] = inputs;
  j["bound"] = bound;
  j["estimate"] = estimate;
  j["std_error"] = std_error;
  j["replicates"] = replicates;
  j["pass"] = pass;
  j["flags"] = flags;
  return j;
}

Json DriftConstants::to_json() const {
  Json j;
  j["d"] = d;
  j["lambda_min"] = lambda_min;
  j["lambda_max"] = lambda_max;
  j["C"] = stat_bound_c;
  j["L"] = lipschitz_l;
  j["alpha"] = alpha;
  j["m"] = m;
  j["eta"] = eta;
  j["n"] = n;
  j["gamma1"] = gamma1;
  j["epsilon"] = epsilon;
  j["a"] = a;
  j["b_n"] = b_n;
  j["c_n"] = c_n;
  j["r_n"] = r_n;
  j["condition_ok"] = condition_ok;
  return j;
}

DriftConstants drift_constants(int d, double lambda_min, double lambda_max,
                               double stat_bound_c, double lipschitz_l,
                               double alpha, int m, double eta, long n,
                               double gamma1) {
  if (gamma1 <= 0.0 || gamma1 >= 0.5)
    throw std::invalid_argument("drift_constants: gamma1 must be in (0, 1/2)");
  if (lambda_min <= 0.0 || lambda_max <= 0.0 || eta <= 0.0 || n < 1 || m < 1 ||
      stat_bound_c <= 0.0 || lipschitz_l < 0.0 || alpha < 0.0)
    throw std::invalid_argument("drift_constants: inputs must be positive");

  DriftConstants k;
  k.d = d;
  k.lambda_min = lambda_min;
  k.lambda_max = lambda_max;
  k.stat_bound_c = stat_bound_c;
  k.lipschitz_l = lipschitz_l;
  k.alpha = alpha;
  k.m = m;
  k.eta = eta;
  k.n = n;
  k.gamma1 = gamma1;

  k.epsilon = std::sqrt(static_cast<double>(d)) * stat_bound_c * lipschitz_l *
              std::pow(alpha, m);
  k.a = lambda_min * lambda_min - k.epsilon * lambda_max -
        0.5 * eta * lambda_max * (lambda_max + k.epsilon) *
            (lambda_max + k.epsilon);
  const double nd = static_cast<double>(n);
  k.b_n = lambda_max * (1.0 + k.epsilon) *
          (1.0 + eta * lambda_max + eta * k.epsilon) *
          std::pow(nd, -0.5 + gamma1);
  k.c_n = 0.5 * eta * lambda_max *
          (d * stat_bound_c * stat_bound_c * std::pow(nd, -2.0 * gamma1) +
           (1.0 + k.epsilon) * (1.0 + k.epsilon)) *
          std::pow(nd, -1.0 + 2.0 * gamma1);
  k.condition_ok = k.a > 0.0;
  if (k.condition_ok)
    k.r_n = (k.b_n + std::sqrt(k.b_n * k.b_n + 4.0 * k.a * k.c_n)) /
            (2.0 * k.a);
  return k;
}

double beta_schedule(long n, double gamma2) {
  return std::max(2.0, std::pow(static_cast<double>(n), gamma2));
}

double chi_divergence_stat(const Family& family, const Vector& theta_star,
                           const Vector& theta) {
  const double exponent = -2.0 * family.cumulant(theta_star) +
                          family.cumulant(theta) +
                          family.cumulant(2.0 * theta_star - theta);
  return std::sqrt(std::max(std::exp(exponent) - 1.0, 0.0));
}

double estimate_lipschitz_L(const Family& family, const Vector& theta_star,
                            const ParamDomain& domain,
                            int grid_points_per_dim) {
  if (grid_points_per_dim < 3)
    throw std::invalid_argument("estimate_lipschitz_L: need >= 3 points");
  const int d = domain.dim();
  const auto points = domain.grid(grid_points_per_dim);
  std::vector<double> f(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    f[i] = chi_divergence_stat(family, theta_star, points[i]);

  // Adjacent pairs differ by one step along one axis; with the grid laid out
  // lexicographically (last coordinate fastest) the axis-j neighbour of index
  // i is i + stride_j.
  double best = 0.0;
  std::vector<std::size_t> stride(d, 1);
  for (int j = d - 2; j >= 0; --j)
    stride[j] = stride[j + 1] * grid_points_per_dim;
  for (int j = 0; j < d; ++j) {
    const double h =
        (domain.upper[j] - domain.lower[j]) / (grid_points_per_dim - 1);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t along =
          (i / stride[j]) % grid_points_per_dim;
      if (along + 1 >= static_cast<std::size_t>(grid_points_per_dim)) continue;
      best = std::max(best, std::abs(f[i + stride[j]] - f[i]) / h);
    }
  }
  return best;
}

double lyapunov_u(const Family& family, const Matrix& data,
                  const Vector& theta, double loglik_at_mle) {
  return loglik_at_mle - family.log_likelihood(data, theta);
}

double lyapunov_u(const Family& family, const Matrix& data,
                  const Vector& theta) {
  const MleResult fit = mle(family, data);
  return lyapunov_u(family, data, theta,
                    family.log_likelihood(data, fit.theta));
}

ConstraintDeviations constraint_deviations(const Family& family,
                                           const Matrix& data,
                                           const Vector& theta_star,
                                           const Kernel& kernel, int m,
                                           const std::vector<Vector>& grid) {
  ConstraintDeviations out;
  const Vector phibar = family.mean_suff_stat(data);
  out.moment_dev = (phibar - family.mean_param(theta_star)).norm();
  out.mle_dev = (mle(family, data).theta - theta_star).norm();

  const int n = static_cast<int>(data.cols());
  if (kernel.has_transition_matrix()) {
    // Exact f_theta per state through P^m; the population mean under p* is
    // E_{p*} f_theta = sum_s p*(s) f_theta(s).
    StateTable table(family);
    const Vector p_star = table.exact_distribution(theta_star);
    double worst = 0.0;
    for (const Vector& theta : grid) {
      const Matrix pm = matrix_power(kernel.transition_matrix(theta).P, m);
      const Matrix f_per_state = table.stats() * pm.transpose();
      Vector empirical = Vector::Zero(family.dim());
      for (int i = 0; i < n; ++i)
        empirical += f_per_state.col(table.state_index(data.col(i)));
      empirical /= n;
      worst = std::max(worst,
                       (empirical - f_per_state * p_star).norm());
    }
    out.empirical_process_dev = worst;
    out.ep_computed = true;
  } else if (kernel.has_exact_conditional_mean()) {
    // Affine kernels: f_theta(x) is closed-form; the population mean under
    // p* is f_theta evaluated at the p* state mean (affine in x).
    const Vector state_mean_star = family.mean_param(theta_star);
    double worst = 0.0;
    for (const Vector& theta : grid) {
      Vector empirical = Vector::Zero(family.dim());
      for (int i = 0; i < n; ++i)
        empirical += kernel.exact_conditional_mean(theta, data.col(i), m);
      empirical /= n;
      const Vector population =
          kernel.exact_conditional_mean(theta, state_mean_star, m);
      worst = std::max(worst, (empirical - population).norm());
    }
    out.empirical_process_dev = worst;
    out.ep_computed = true;
  }
  return out;
}

namespace {

// Exact mean CD-gradient error through transition powers:
// E[dg] = mu(theta) - (1/n) sum_i E[phi(X_m) | X_i].
Vector exact_mean_dg(const Family& family, const Kernel& kernel,
                     const StateTable& table, const Matrix& data,
                     const Vector& theta, int m) {
  const Matrix pm = matrix_power(kernel.transition_matrix(theta).P, m);
  const Matrix chain_mean = table.stats() * pm.transpose();
  Vector avg = Vector::Zero(family.dim());
  const int n = static_cast<int>(data.cols());
  for (int i = 0; i < n; ++i)
    avg += chain_mean.col(table.state_index(data.col(i)));
  avg /= n;
  return family.mean_param(theta) - avg;
}

}  // namespace

CheckRecord bias_report(const Family& family, const Kernel& kernel,
                        const Matrix& data, const Vector& theta, int m,
                        long replicates, const DriftConstants& constants,
                        std::uint64_t seed) {
  CheckRecord rec;
  rec.check = "bias_bound";
  const long n = data.cols();
  const Vector theta_hat = mle(family, data).theta;
  const double dist = (theta - theta_hat).norm();
  rec.bound = (1.0 + constants.epsilon) *
                  std::pow(static_cast<double>(n), -0.5 + constants.gamma1) +
              constants.epsilon * dist;
  rec.inputs["m"] = m;
  rec.inputs["n"] = n;
  rec.inputs["dist_to_mle"] = dist;
  rec.inputs["epsilon"] = constants.epsilon;

  if (kernel.has_transition_matrix()) {
    StateTable table(family);
    rec.estimate = exact_mean_dg(family, kernel, table, data, theta, m).norm();
    rec.std_error = 0.0;
    rec.replicates = 0;
    rec.flags.push_back("exact");
    rec.pass = rec.estimate <= rec.bound;
    return rec;
  }

  if (replicates < 1000)
    throw std::invalid_argument("bias_report: need >= 1000 replicates");
  const Vector phibar = family.mean_suff_stat(data);
  const Vector g = family.exact_gradient(phibar, theta);
  Vector sum = Vector::Zero(family.dim());
  Matrix sum_sq = Matrix::Zero(family.dim(), family.dim());
  for (long r = 0; r < replicates; ++r) {
    const Vector dg =
        cd_gradient(family, kernel, data, phibar, theta, m,
                    derive_stream(seed, stream::replicate, r), 0) -
        g;
    sum += dg;
    sum_sq += dg * dg.transpose();
  }
  const Vector mean = sum / replicates;
  const Matrix cov =
      (sum_sq - replicates * mean * mean.transpose()) / (replicates - 1);
  rec.estimate = mean.norm();
  // Delta-method error for the norm of a Monte Carlo mean.
  rec.std_error = std::sqrt(std::max(
      0.0, mean.dot(cov * mean) / std::max(rec.estimate * rec.estimate, 1e-300) /
               replicates));
  rec.replicates = replicates;
  rec.pass = rec.estimate - 3.0 * rec.std_error <= rec.bound;
  return rec;
}

CheckRecord variance_report(const Family& family, const Kernel& kernel,
                            const Matrix& data, const Vector& theta, int m,
                            long replicates, std::uint64_t seed) {
  if (replicates < 1000)
    throw std::invalid_argument("variance_report: need >= 1000 replicates");
  CheckRecord rec;
  rec.check = "variance_bound";
  const long n = data.cols();
  const int d = family.dim();
  const double c = family.stat_bound();
  rec.bound = d * c * c / static_cast<double>(n);
  rec.inputs["m"] = m;
  rec.inputs["n"] = n;
  rec.inputs["C"] = c;
  if (!family.stat_bound_exact()) rec.flags.push_back("stat-bound-surrogate");

  const Vector phibar = family.mean_suff_stat(data);
  // Per-replicate squared deviations of the CD gradient around its mean give
  // the trace estimate; SE from the empirical variance of those deviations.
  std::vector<Vector> draws(replicates, Vector(d));
  Vector mean = Vector::Zero(d);
  for (long r = 0; r < replicates; ++r) {
    draws[r] = cd_gradient(family, kernel, data, phibar, theta, m,
                           derive_stream(seed, stream::replicate, r), 0);
    mean += draws[r];
  }
  mean /= replicates;
  double ss = 0.0, ss2 = 0.0;
  for (const Vector& g : draws) {
    const double sq = (g - mean).squaredNorm();
    ss += sq;
    ss2 += sq * sq;
  }
  rec.estimate = ss / (replicates - 1);
  const double var_of_sq =
      std::max(0.0, ss2 / replicates - (ss / replicates) * (ss / replicates));
  rec.std_error = std::sqrt(var_of_sq / replicates);
  rec.replicates = replicates;

  if (kernel.has_transition_matrix()) {
    // Exact trace: independent chains average, so Cov dg =
    // (1/n^2) sum_i Cov(phi(X_m) | X_i).
    StateTable table(family);
    const Matrix pm = matrix_power(kernel.transition_matrix(theta).P, m);
    const Matrix& phi = table.stats();
    double trace = 0.0;
    for (int i = 0; i < data.cols(); ++i) {
      const Vector row = pm.row(table.state_index(data.col(i))).transpose();
      const Vector mu_row = phi * row;
      trace += (phi * row.asDiagonal() * phi.transpose() -
                mu_row * mu_row.transpose())
                   .trace();
    }
    rec.inputs["exact_trace"] = trace / (static_cast<double>(n) * n);
  }
  rec.pass = rec.estimate - 3.0 * rec.std_error <= rec.bound;
  return rec;
}

CheckRecord lattice_check(const Trajectory& traj, const Family& family,
                          const Matrix& data, double tolerance) {
  CheckRecord rec;
  rec.check = "lattice";
  if (!family.stat_bound_exact() || family.enumerable_states() <= 0)
    throw std::invalid_argument("lattice_check: discrete family required");
  const long n = data.cols();
  const double spacing = traj.config.eta / static_cast<double>(n);
  const int d = family.dim();
  rec.inputs["spacing"] = spacing;
  rec.inputs["steps"] = static_cast<long>(traj.cd_grads.size());
  rec.bound = tolerance;

  // Integer bookkeeping: each gradient is (integer vector)/n, so the exact
  // iterate is theta0 + spacing * K_t with K_t accumulated in integers.
  std::vector<long long> k_accum(d, 0);
  double worst_nearest = 0.0, worst_reconstruction = 0.0;
  const Vector& theta0 = traj.thetas.front();
  for (std::size_t t = 0; t < traj.cd_grads.size(); ++t) {
    for (int k = 0; k < d; ++k) {
      k_accum[k] +=
          std::llround(traj.cd_grads[t][k] * static_cast<double>(n));
      const double value = traj.thetas[t + 1][k] - theta0[k];
      const double nearest =
          std::abs(value - spacing * std::round(value / spacing));
      const double reconstruction =
          std::abs(value - spacing * static_cast<double>(k_accum[k]));
      worst_nearest = std::max(worst_nearest, nearest);
      worst_reconstruction = std::max(worst_reconstruction, reconstruction);
    }
  }
  rec.inputs["max_reconstruction_drift"] = worst_reconstruction;
  rec.estimate = std::max(worst_nearest, worst_reconstruction);
  rec.replicates = static_cast<long>(traj.cd_grads.size());
  rec.pass = rec.estimate <= tolerance;
  return rec;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - lo;
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

}  // namespace cdlab
