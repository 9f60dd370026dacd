#pragma once

#include <json.hpp>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cdlab/cd.hpp"
#include "cdlab/oracle.hpp"
#include "cdlab/spectral.hpp"

namespace cdlab {

using Json = nlohmann::ordered_json;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One verified inequality or measurement.  pass is always a pure function of
// the numbers and the tolerance policy: inequality checks grant the bound
// 3 standard errors of slack; exact checks compare against the tolerance; a
// record that cannot be computed is flagged and passes as inconclusive.
struct CheckRecord {
  std::string check;
  Json inputs = Json::object();
  double bound = kNaN;
  double estimate = kNaN;
  double std_error = kNaN;
  long replicates = 0;
  bool pass = false;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
  Json to_json() const;
};

// Closed-form constants of the one-step drift inequality.
struct DriftConstants {
  int d = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double stat_bound_c = 0.0;  // C
  double lipschitz_l = 0.0;   // L
  double alpha = 0.0;
  int m = 1;
  double eta = 0.0;
  long n = 0;
  double gamma1 = 0.1;

  double epsilon = 0.0;  // sqrt(d) C L alpha^m
  double a = 0.0;
  double b_n = 0.0;
  double c_n = 0.0;
  double r_n = kNaN;  // defined only when a > 0
  bool condition_ok = false;

  Json to_json() const;
};

DriftConstants drift_constants(int d, double lambda_min, double lambda_max,
                               double stat_bound_c, double lipschitz_l,
                               double alpha, int m, double eta, long n,
                               double gamma1);

// beta = max(2, n^gamma2): always > 1, grows like n^gamma2.
double beta_schedule(long n, double gamma2);

struct BallSpec {
  Vector center;  // the MLE
  double radius;  // beta * r_n
  double beta;
};

// Deviations behind the three data constraints: (1) moment deviation
// ||phibar - mu(theta*)||, (2) MLE deviation ||theta_hat - theta*||, (3) the
// empirical-process deviation sup_grid ||(1/n) sum_i E[phi(X_m)|X_i] - E f||.
struct ConstraintDeviations {
  double moment_dev = kNaN;
  double mle_dev = kNaN;
  double empirical_process_dev = kNaN;
  bool ep_computed = false;
};

ConstraintDeviations constraint_deviations(const Family& family,
                                           const Matrix& data,
                                           const Vector& theta_star,
                                           const Kernel& kernel, int m,
                                           const std::vector<Vector>& grid);

// Chi-square-divergence surrogate f(theta) =
// sqrt(exp(-2 cum(theta*) + cum(theta) + cum(2 theta* - theta)) - 1) and its
// grid Lipschitz estimate over adjacent pairs.
double chi_divergence_stat(const Family& family, const Vector& theta_star,
                           const Vector& theta);
double estimate_lipschitz_L(const Family& family, const Vector& theta_star,
                            const ParamDomain& domain, int grid_points_per_dim);

// Log-likelihood gap u(theta) = l(theta_hat) - l(theta).
double lyapunov_u(const Family& family, const Matrix& data,
                  const Vector& theta);
double lyapunov_u(const Family& family, const Matrix& data,
                  const Vector& theta, double loglik_at_mle);

// ||E dg|| against the bias bound
// (1 + eps) n^(-1/2+gamma1) + eps ||theta - theta_hat||, with dg the CD
// gradient error; exact through transition-matrix powers when the kernel has
// a matrix, Monte Carlo otherwise.
CheckRecord bias_report(const Family& family, const Kernel& kernel,
                        const Matrix& data, const Vector& theta, int m,
                        long replicates, const DriftConstants& constants,
                        std::uint64_t seed);

// trace Cov[dg] against d C^2 / n; empirical trace over replicates, plus the
// exact per-row value when enumerable.
CheckRecord variance_report(const Family& family, const Kernel& kernel,
                            const Matrix& data, const Vector& theta, int m,
                            long replicates, std::uint64_t seed);

// Monte Carlo drift estimate E[u(theta_1) - u(theta)] from a fixed theta.
CheckRecord drift_check(const Family& family, const Kernel& kernel,
                        const Matrix& data, const Vector& theta,
                        const CdConfig& config, const DriftConstants& constants,
                        long replicates);

// Mean hitting time of the ball from each start, against u(z) / delta.
std::vector<CheckRecord> hitting_time_check(
    const Family& family, const Kernel& kernel, const Matrix& data,
    const CdConfig& config, const DriftConstants& constants,
    const BallSpec& ball, const std::vector<Vector>& starts, long replicates,
    long horizon_cap = 1000000);

// Long-run occupancy outside the ball and the concentration-ratio bound.
CheckRecord concentration_report(const Family& family, const Kernel& kernel,
                                 const Matrix& data, const CdConfig& config,
                                 const DriftConstants& constants, double beta,
                                 long total_steps, long burn_in);

struct SweepRow {
  long n = 0;
  // Per-seed statistics summarized by quartiles: total ||theta_bar - theta*||
  // and the triangle terms (ergodic-vs-tail, tail-vs-mle, mle-vs-theta*).
  double median_total = kNaN, q1_total = kNaN, q3_total = kNaN;
  double median_term1 = kNaN, q1_term1 = kNaN, q3_term1 = kNaN;
  double median_term2 = kNaN, q1_term2 = kNaN, q3_term2 = kNaN;
  double median_term3 = kNaN, q1_term3 = kNaN, q3_term3 = kNaN;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Raw per-seed values, aligned with rows: [n_index][seed_index].
  std::vector<std::vector<double>> totals;
  std::vector<std::vector<double>> term3;  // MLE deviations, for scaling checks
};

SweepResult ergodic_sweep(const Family& family, const Kernel& kernel,
                          const Vector& theta_star,
                          const std::vector<long>& n_list,
                          const CdConfig& config_template, int seeds_per_n,
                          std::uint64_t base_seed);

// Lattice membership of a recorded trajectory: nearest-lattice residual plus
// an integer-bookkeeping reconstruction maintained alongside the float path.
CheckRecord lattice_check(const Trajectory& traj, const Family& family,
                          const Matrix& data, double tolerance);

double quantile(std::vector<double> values, double q);

}  // namespace cdlab
