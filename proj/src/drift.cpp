#include <algorithm>
#include <cmath>
#include <numeric>

#include "cdlab/diagnostics.hpp"

namespace cdlab {

namespace {

constexpr double kZ99 = 2.326;  // one-sided 99% normal quantile

Json vector_json(const Vector& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

}  // namespace

CheckRecord drift_check(const Family& family, const Kernel& kernel,
                        const Matrix& data, const Vector& theta,
                        const CdConfig& config, const DriftConstants& constants,
                        long replicates) {
  if (replicates < 1000)
    throw std::invalid_argument("drift_check: need >= 1000 replicates");
  if (config.eta != constants.eta)
    throw std::invalid_argument("drift_check: config/constants eta mismatch");

  CheckRecord rec;
  rec.check = "drift";
  const Vector phibar = family.mean_suff_stat(data);
  const Vector theta_hat = mle(family, data).theta;
  const double ll_theta = family.log_likelihood(data, theta);
  const double radius = (theta - theta_hat).norm();
  const double eta = config.eta;
  rec.bound = -eta * (constants.a * radius * radius -
                      constants.b_n * radius - constants.c_n);

  double sum = 0.0, sum_sq = 0.0;
  for (long r = 0; r < replicates; ++r) {
    const Vector g =
        cd_gradient(family, kernel, data, phibar, theta, config.m,
                    derive_stream(config.seed, stream::replicate, r), 0);
    const Vector theta1 =
        cd_update(theta, g, eta, config.domain, config.projection);
    // u(theta1) - u(theta) = l(theta) - l(theta1): the MLE term cancels.
    const double du = ll_theta - family.log_likelihood(data, theta1);
    sum += du;
    sum_sq += du * du;
  }
  rec.estimate = sum / replicates;
  const double var = std::max(
      0.0, (sum_sq - replicates * rec.estimate * rec.estimate) /
               (replicates - 1));
  rec.std_error = std::sqrt(var / replicates);
  rec.replicates = replicates;
  const double ucl99 = rec.estimate + kZ99 * rec.std_error;

  rec.inputs["radius"] = radius;
  rec.inputs["r_n"] = constants.r_n;
  rec.inputs["eta"] = eta;
  rec.inputs["m"] = config.m;
  rec.inputs["n"] = static_cast<long>(data.cols());
  rec.inputs["ucl99"] = ucl99;
  // Negativity is demanded from 2*beta*r_n outward; beta never goes below its
  // schedule floor of 2, so 4*r_n is the earliest radius any configuration
  // may assert at.
  const double negativity_radius = 4.0 * constants.r_n;
  rec.inputs["negativity_radius"] = negativity_radius;

  if (!constants.condition_ok) {
    rec.flags.push_back("condition-violated");
    rec.pass = true;  // inconclusive: no ball to be outside of
    return rec;
  }
  if (rec.estimate > rec.bound + 4.0 * rec.std_error)
    rec.flags.push_back("quad-bound-violated");
  if (radius >= negativity_radius) {
    rec.pass = ucl99 < 0.0;
  } else {
    rec.flags.push_back("record-only");
    rec.pass = true;  // the quadratic bound is vacuous this close to the MLE
  }
  return rec;
}

std::vector<CheckRecord> hitting_time_check(
    const Family& family, const Kernel& kernel, const Matrix& data,
    const CdConfig& config, const DriftConstants& constants,
    const BallSpec& ball, const std::vector<Vector>& starts, long replicates,
    long horizon_cap) {
  if (replicates < 1)
    throw std::invalid_argument("hitting_time_check: replicates >= 1");
  if (config.eta != constants.eta)
    throw std::invalid_argument(
        "hitting_time_check: config/constants eta mismatch");
  if (!constants.condition_ok)
    throw std::invalid_argument(
        "hitting_time_check: drift condition fails (a <= 0)");
  if (ball.beta <= 1.0)
    throw std::invalid_argument("hitting_time_check: beta must exceed 1");

  const Vector phibar = family.mean_suff_stat(data);
  const double ll_hat =
      family.log_likelihood(data, mle(family, data).theta);
  const double delta = constants.eta * (ball.beta * ball.beta - 1.0) *
                       constants.c_n;

  std::vector<CheckRecord> records;
  records.reserve(starts.size());
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const Vector& z = starts[s];
    if ((z - ball.center).norm() <= ball.radius)
      throw std::invalid_argument(
          "hitting_time_check: start inside the ball");

    CheckRecord rec;
    rec.check = "hitting_time";
    const double u_z = ll_hat - family.log_likelihood(data, z);
    rec.bound = u_z / delta;

    double sum = 0.0, sum_sq = 0.0;
    long finished = 0, capped = 0;
    for (long r = 0; r < replicates; ++r) {
      const std::uint64_t run_seed =
          derive_stream(config.seed, stream::replicate, s, r);
      Vector theta = z;
      long t = 0;
      bool hit = false;
      while (t < horizon_cap) {
        const Vector g = cd_gradient(family, kernel, data, phibar, theta,
                                     config.m, run_seed, t);
        theta = cd_update(theta, g, config.eta, config.domain,
                          config.projection);
        ++t;
        if ((theta - ball.center).norm() <= ball.radius) {
          hit = true;
          break;
        }
      }
      if (hit) {
        sum += t;
        sum_sq += static_cast<double>(t) * t;
        ++finished;
      } else {
        ++capped;
      }
    }

    // Capped runs are reported, never averaged in as if T equaled the cap.
    rec.replicates = finished;
    const double cap_fraction =
        static_cast<double>(capped) / static_cast<double>(replicates);
    if (finished > 0) {
      rec.estimate = sum / finished;
      if (finished > 1) {
        const double var = std::max(
            0.0,
            (sum_sq - finished * rec.estimate * rec.estimate) / (finished - 1));
        rec.std_error = std::sqrt(var / finished);
      } else {
        rec.std_error = 0.0;
      }
    }
    rec.inputs["start"] = vector_json(z);
    rec.inputs["u_start"] = u_z;
    rec.inputs["delta"] = delta;
    rec.inputs["beta"] = ball.beta;
    rec.inputs["radius"] = ball.radius;
    rec.inputs["cap_fraction"] = cap_fraction;
    rec.inputs["horizon_cap"] = horizon_cap;
    if (cap_fraction > 0.05) {
      rec.flags.push_back("inconclusive");
      rec.pass = true;
    } else {
      rec.pass = rec.bound >= rec.estimate - 3.0 * rec.std_error;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

CheckRecord concentration_report(const Family& family, const Kernel& kernel,
                                 const Matrix& data, const CdConfig& config,
                                 const DriftConstants& constants, double beta,
                                 long total_steps, long burn_in) {
  if (burn_in < 0 || burn_in >= total_steps)
    throw std::invalid_argument(
        "concentration_report: need 0 <= burn_in < total_steps");
  if (beta <= 1.0)
    throw std::invalid_argument("concentration_report: beta must exceed 1");

  CheckRecord rec;
  rec.check = "concentration";
  const double radius =
      constants.condition_ok ? beta * constants.r_n : kNaN;
  rec.bound = (1.0 / (beta * beta - 1.0)) *
              (constants.c_n +
               constants.b_n * constants.b_n / (4.0 * constants.a)) /
              constants.c_n;

  CdConfig run_config = config;
  run_config.steps = static_cast<int>(total_steps);
  const Trajectory traj = run_cd(family, kernel, data, run_config);
  const Vector theta_hat = mle(family, data).theta;

  std::vector<double> dists;
  dists.reserve(total_steps - burn_in);
  long outside = 0;
  for (long t = burn_in + 1; t <= total_steps; ++t) {
    const double dist = (traj.thetas[t] - theta_hat).norm();
    dists.push_back(dist);
    if (constants.condition_ok && dist > radius) ++outside;
  }
  const double n_post = static_cast<double>(dists.size());
  const double occupancy_out = outside / n_post;
  const double mean_dist =
      std::accumulate(dists.begin(), dists.end(), 0.0) / n_post;
  const double median_dist = quantile(dists, 0.5);

  rec.inputs["beta"] = beta;
  rec.inputs["radius"] = radius;
  rec.inputs["n"] = static_cast<long>(data.cols());
  rec.inputs["total_steps"] = total_steps;
  rec.inputs["burn_in"] = burn_in;
  rec.inputs["occupancy_outside"] = occupancy_out;
  rec.inputs["mean_dist"] = mean_dist;
  rec.inputs["median_dist"] = median_dist;
  rec.replicates = static_cast<long>(n_post);

  if (!constants.condition_ok) {
    rec.flags.push_back("condition-violated");
    rec.pass = true;
    return rec;
  }

  // Ratio pi(outside)/pi(inside) against the concentration bound.  Successive
  // iterates are dependent, so the binomial standard error below is optimistic;
  // with occupancy at or near zero the comparison is slack enough not to care.
  const double occupancy_in = 1.0 - occupancy_out;
  rec.estimate = occupancy_out / occupancy_in;
  const double se_p = std::sqrt(occupancy_out * occupancy_in / n_post);
  rec.std_error = se_p / (occupancy_in * occupancy_in);
  if (outside == 0) rec.flags.push_back("degenerate-zero-occupancy");
  rec.pass = rec.bound >= rec.estimate - 3.0 * rec.std_error;
  return rec;
}

}  // namespace cdlab
