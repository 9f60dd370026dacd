#include <stdexcept>

#include "cdlab/diagnostics.hpp"

namespace cdlab {

SweepResult ergodic_sweep(const Family& family, const Kernel& kernel,
                          const Vector& theta_star,
                          const std::vector<long>& n_list,
                          const CdConfig& config_template, int seeds_per_n,
                          std::uint64_t base_seed) {
  if (n_list.empty())
    throw std::invalid_argument("ergodic_sweep: empty n_list");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("ergodic_sweep: n_list must be increasing");
  if (seeds_per_n < 1)
    throw std::invalid_argument("ergodic_sweep: seeds_per_n >= 1");
  if (config_template.theta0.size() != family.dim())
    throw std::invalid_argument("ergodic_sweep: theta0 dimension mismatch");
  if (config_template.steps < 2)
    throw std::invalid_argument("ergodic_sweep: need steps >= 2");

  SweepResult result;
  result.rows.reserve(n_list.size());
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const long n = n_list[ni];
    std::vector<double> totals, t1, t2, t3;
    totals.reserve(seeds_per_n);
    t1.reserve(seeds_per_n);
    t2.reserve(seeds_per_n);
    t3.reserve(seeds_per_n);
    for (int s = 0; s < seeds_per_n; ++s) {
      const Matrix data = family.sample_data(
          theta_star, static_cast<int>(n),
          derive_stream(base_seed, stream::data, static_cast<std::uint64_t>(n),
                        s));
      CdConfig config = config_template;
      config.seed = derive_stream(base_seed, stream::chain,
                                  static_cast<std::uint64_t>(n), s);
      const Trajectory traj = run_cd(family, kernel, data, config);
      const Vector theta_bar = ergodic_average(traj, 0);
      const Vector tail = ergodic_average(traj, config.steps / 2);
      const Vector theta_hat = mle(family, data).theta;
      totals.push_back((theta_bar - theta_star).norm());
      t1.push_back((theta_bar - tail).norm());
      t2.push_back((tail - theta_hat).norm());
      t3.push_back((theta_hat - theta_star).norm());
    }
    SweepRow row;
    row.n = n;
    row.median_total = quantile(totals, 0.5);
    row.q1_total = quantile(totals, 0.25);
    row.q3_total = quantile(totals, 0.75);
    row.median_term1 = quantile(t1, 0.5);
    row.q1_term1 = quantile(t1, 0.25);
    row.q3_term1 = quantile(t1, 0.75);
    row.median_term2 = quantile(t2, 0.5);
    row.q1_term2 = quantile(t2, 0.25);
    row.q3_term2 = quantile(t2, 0.75);
    row.median_term3 = quantile(t3, 0.5);
    row.q1_term3 = quantile(t3, 0.25);
    row.q3_term3 = quantile(t3, 0.75);
    result.rows.push_back(row);
    result.totals.push_back(std::move(totals));
    result.term3.push_back(std::move(t3));
  }
  return result;
}

}  // namespace cdlab
