#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "cdlab/config.hpp"
#include "cdlab/report.hpp"

namespace fs = std::filesystem;
using namespace cdlab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  bool has_seed = false;
  std::uint64_t seed = 0;
  int jobs = 1;
};

ExperimentConfig resolve_config(const CliOptions& opt) {
  if (opt.config_path.empty() == opt.preset.empty())
    throw ConfigError("exactly one of --config or --preset is required");
  ExperimentConfig config = opt.preset.empty()
                                ? load_config_file(opt.config_path)
                                : load_preset(opt.preset);
  if (opt.has_seed) config.seed = opt.seed;
  if (!opt.out_dir.empty()) {
    config.out_dir = opt.out_dir;
  } else if (config.out_dir == ".") {
    if (const char* env = std::getenv("CDLAB_OUT"); env && *env)
      config.out_dir = env;
  }
  return config;
}

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string start_token(const Vector& start) {
  std::string tok;
  for (int i = 0; i < start.size(); ++i) {
    if (i) tok += 'x';
    tok += format_coord(start[i]);
  }
  return tok;
}

std::string out_path(const ExperimentConfig& config, const std::string& name) {
  return (fs::path(config.out_dir) / name).string();
}

void write_manifest(const ExperimentConfig& config, const CliOptions& opt,
                    const std::string& command,
                    const std::vector<std::string>& files, Json extra) {
  Json m;
  m["version"] = kVersion;
  m["command"] = command;
  if (!opt.preset.empty()) m["preset"] = opt.preset;
  m["config"] = resolved_config_json(config);
  if (!extra.empty()) m["details"] = std::move(extra);
  m["files"] = files;
  write_file_atomic(
      out_path(config, "manifest_" + command + "_" +
                           std::to_string(config.seed) + ".json"),
      m.dump(2) + "\n");
}

CdConfig base_cd_config(const ExperimentConfig& config, const Vector& theta0,
                        std::uint64_t seed) {
  CdConfig cfg;
  cfg.eta = config.cd.eta;
  cfg.m = config.cd.m;
  cfg.steps = config.cd.steps;
  cfg.theta0 = theta0;
  cfg.domain = config.cd.domain;
  cfg.projection = config.cd.projection;
  cfg.seed = seed;
  return cfg;
}

int cmd_run(const ExperimentConfig& config, const CliOptions& opt,
            const Family& family, const Kernel& kernel, const Matrix& data) {
  const std::size_t n_starts = config.cd.starts.size();
  std::vector<std::string> files(n_starts);
  std::vector<std::string> mu_files(n_starts);
  const bool gaussian = config.family.name == "gaussian_mean";

  auto run_one = [&](std::size_t i) {
    const Vector& start = config.cd.starts[i];
    const CdConfig cfg = base_cd_config(
        config, start, derive_stream(config.seed, stream::chain, i));
    const Trajectory traj = run_cd(family, kernel, data, cfg);
    const std::string base =
        "traj_" + start_token(start) + "_" + std::to_string(config.seed);
    files[i] = base + ".csv";
    write_file_atomic(out_path(config, files[i]), trajectory_csv(traj));
    if (gaussian) {
      mu_files[i] = base + "_mu.csv";
      write_file_atomic(out_path(config, mu_files[i]),
                        mean_path_csv(traj, config.family.sigma0));
    }
  };

  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1 || n_starts <= 1) {
    for (std::size_t i = 0; i < n_starts; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min(static_cast<std::size_t>(jobs), n_starts);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_starts; i = next++) run_one(i);
      });
    for (std::thread& t : pool) t.join();
  }

  std::vector<std::string> all_files = files;
  if (gaussian)
    all_files.insert(all_files.end(), mu_files.begin(), mu_files.end());
  write_manifest(config, opt, "run", all_files, Json::object());
  return 0;
}

int cmd_gradient_field(const ExperimentConfig& config, const CliOptions& opt,
                       const Family& family, const Kernel& kernel,
                       const Matrix& data) {
  if (!config.grid)
    throw ConfigError("gradient-field requires a config.grid block");
  const GridBlock& grid = *config.grid;
  const int d = family.dim();
  const Vector phibar = family.mean_suff_stat(data);

  const auto grid_value = [&](int coord, int index) {
    return grid.lower[coord] + (grid.upper[coord] - grid.lower[coord]) *
                                   static_cast<double>(index) /
                                   (grid.points - 1);
  };
  // Off-pair coordinates of the RBM projections sit at the grid value
  // closest to 0.5.
  const auto pinned_value = [&](int coord) {
    double best = grid_value(coord, 0);
    for (int i = 1; i < grid.points; ++i) {
      const double v = grid_value(coord, i);
      if (std::abs(v - 0.5) < std::abs(best - 0.5)) best = v;
    }
    return best;
  };

  std::string header = "";
  for (int k = 1; k <= d; ++k) header += (k == 1 ? "" : ",") + ("theta_" + std::to_string(k));
  for (int k = 1; k <= d; ++k) header += ",exact_" + std::to_string(k);
  header += ",rep";
  for (int k = 1; k <= d; ++k) header += ",cd_" + std::to_string(k);
  for (int k = 1; k <= d; ++k) header += ",dir_" + std::to_string(k);
  header += '\n';

  const auto emit_rows = [&](std::string& out, const Vector& theta,
                             std::uint64_t point_key) {
    const Vector exact = family.exact_gradient(phibar, theta);
    for (int rep = 0; rep < grid.replicates; ++rep) {
      const Vector g = cd_gradient(
          family, kernel, data, phibar, theta, config.cd.m,
          derive_stream(config.seed, stream::replicate, point_key, rep), 0);
      const double norm = g.norm();
      for (int k = 0; k < d; ++k)
        out += (k == 0 ? "" : ",") + format_g17(theta[k]);
      for (int k = 0; k < d; ++k) out += "," + format_g17(exact[k]);
      out += "," + std::to_string(rep);
      for (int k = 0; k < d; ++k) out += "," + format_g17(g[k]);
      for (int k = 0; k < d; ++k)
        out += "," + format_g17(norm > 0.0 ? g[k] / norm : 0.0);
      out += '\n';
    }
  };

  std::vector<std::string> files;
  if (config.family.name == "binary_rbm") {
    std::uint64_t point_key = 0;
    for (int a = 0; a < d; ++a) {
      for (int b = a + 1; b < d; ++b) {
        std::string out = header;
        Vector theta(d);
        for (int k = 0; k < d; ++k) theta[k] = pinned_value(k);
        for (int ia = 0; ia < grid.points; ++ia) {
          for (int ib = 0; ib < grid.points; ++ib) {
            theta[a] = grid_value(a, ia);
            theta[b] = grid_value(b, ib);
            emit_rows(out, theta, point_key++);
          }
        }
        const std::string name = "field_" + std::to_string(a + 1) + "x" +
                                 std::to_string(b + 1) + "_" +
                                 std::to_string(config.seed) + ".csv";
        write_file_atomic(out_path(config, name), out);
        files.push_back(name);
      }
    }
  } else {
    ParamDomain box(grid.lower, grid.upper);
    std::string out = header;
    std::uint64_t point_key = 0;
    for (const Vector& theta : box.grid(grid.points))
      emit_rows(out, theta, point_key++);
    const std::string name =
        "field_" + std::to_string(config.seed) + ".csv";
    write_file_atomic(out_path(config, name), out);
    files.push_back(name);
  }

  Json extra;
  extra["grid_lower"] = Json::array();
  extra["grid_upper"] = Json::array();
  for (int k = 0; k < d; ++k) {
    extra["grid_lower"].push_back(grid.lower[k]);
    extra["grid_upper"].push_back(grid.upper[k]);
  }
  extra["points_per_dim"] = grid.points;
  extra["replicates"] = grid.replicates;
  write_manifest(config, opt, "gradient-field", files, std::move(extra));
  return 0;
}

int cmd_diagnose(const ExperimentConfig& config, const CliOptions& opt,
                 const Family& family, const Kernel& kernel,
                 const Matrix& data) {
  const DiagnosticsBlock& dg = config.diagnostics;
  const int d = family.dim();
  const long n = config.data.n;
  std::vector<CheckRecord> records;

  const auto enabled = [&](const char* name) {
    if (dg.checks.empty()) return true;
    for (const std::string& c : dg.checks)
      if (c == name) return true;
    return false;
  };

  // Measured constants over the configured box.
  double lambda_min = std::numeric_limits<double>::infinity();
  double lambda_max = 0.0;
  const auto grid = dg.constants_domain.grid(dg.constants_grid_points);
  for (const Vector& theta : grid) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(family.covariance(theta));
    lambda_min = std::min(lambda_min, eig.eigenvalues().minCoeff());
    lambda_max = std::max(lambda_max, eig.eigenvalues().maxCoeff());
  }
  const double lip =
      estimate_lipschitz_L(family, config.data.theta_star,
                           dg.constants_domain, dg.constants_grid_points);
  double alpha = 0.0;
  std::string alpha_method = "exact-zero";
  if (config.kernel != "exact_resample") {
    if (kernel.has_transition_matrix()) {
      alpha = alpha_sup_over_grid(kernel, dg.constants_domain,
                                  dg.alpha_grid_points)
                  .alpha_sup;
      alpha_method = "dense-grid-sup";
    } else {
      alpha = gibbs_alpha_estimate(kernel, family, config.data.theta_star,
                                   dg.alpha_chain_length,
                                   derive_stream(config.seed, stream::misc, 1));
      alpha_method = "acf-estimate";
    }
  }
  const DriftConstants constants =
      drift_constants(d, lambda_min, lambda_max, family.stat_bound(), lip,
                      alpha, config.cd.m, config.cd.eta, n, dg.gamma1);
  const double beta = beta_schedule(n, dg.gamma2);

  if (enabled("constants")) {
    CheckRecord rec;
    rec.check = "drift_constants";
    rec.inputs = constants.to_json();
    rec.inputs["constants_domain_lower"] = Json::array();
    rec.inputs["constants_domain_upper"] = Json::array();
    for (int k = 0; k < d; ++k) {
      rec.inputs["constants_domain_lower"].push_back(
          dg.constants_domain.lower[k]);
      rec.inputs["constants_domain_upper"].push_back(
          dg.constants_domain.upper[k]);
    }
    rec.inputs["alpha_method"] = alpha_method;
    rec.inputs["beta"] = beta;
    rec.bound = 0.0;
    rec.estimate = constants.a;
    rec.std_error = 0.0;
    rec.pass = true;  // informational; a <= 0 only disables the drift checks
    if (!constants.condition_ok) rec.flags.push_back("condition-violated");
    if (!family.stat_bound_exact())
      rec.flags.push_back("stat-bound-surrogate");
    if (alpha_method == "acf-estimate")
      rec.flags.push_back("alpha-acf-estimate");
    records.push_back(std::move(rec));
  }

  const Vector theta_hat = mle(family, data).theta;
  const double constraint_bound =
      std::pow(static_cast<double>(n), -0.5 + dg.gamma1);

  if (enabled("constraints")) {
    const auto cgrid = dg.constants_domain.grid(dg.constraints_grid_points);
    const ConstraintDeviations dev = constraint_deviations(
        family, data, config.data.theta_star, kernel, config.cd.m, cgrid);
    CheckRecord moment;
    moment.check = "constraint_moment";
    moment.bound = constraint_bound;
    moment.estimate = dev.moment_dev;
    moment.pass = moment.estimate < moment.bound;
    records.push_back(std::move(moment));
    CheckRecord mle_rec;
    mle_rec.check = "constraint_mle";
    mle_rec.bound = constraint_bound;
    mle_rec.estimate = dev.mle_dev;
    mle_rec.pass = mle_rec.estimate < mle_rec.bound;
    records.push_back(std::move(mle_rec));
    CheckRecord ep;
    ep.check = "constraint_empirical_process";
    ep.bound = constraint_bound;
    ep.inputs["grid_points_per_dim"] = dg.constraints_grid_points;
    if (dev.ep_computed) {
      ep.estimate = dev.empirical_process_dev;
      ep.pass = ep.estimate < ep.bound;
    } else {
      ep.flags.push_back("not-computed");
      ep.pass = true;
    }
    records.push_back(std::move(ep));
  }

  const std::vector<std::pair<const char*, Vector>> probe_points = {
      {"mle", theta_hat}, {"theta_star", config.data.theta_star}};
  if (enabled("bias")) {
    int i = 0;
    for (const auto& [label, theta] : probe_points) {
      CheckRecord rec = bias_report(
          family, kernel, data, theta, config.cd.m, dg.replicates, constants,
          derive_stream(config.seed, stream::misc, 2, i++));
      rec.inputs["theta_label"] = label;
      records.push_back(std::move(rec));
    }
  }
  if (enabled("variance")) {
    int i = 0;
    for (const auto& [label, theta] : probe_points) {
      CheckRecord rec = variance_report(
          family, kernel, data, theta, config.cd.m, dg.replicates,
          derive_stream(config.seed, stream::misc, 3, i++));
      rec.inputs["theta_label"] = label;
      records.push_back(std::move(rec));
    }
  }

  if (constants.condition_ok) {
    if (enabled("drift")) {
      const double radius_base = 2.0 * beta * constants.r_n;
      for (std::size_t k = 0; k < dg.drift_radius_multipliers.size(); ++k) {
        const double radius = radius_base * dg.drift_radius_multipliers[k];
        Rng dir_rng(config.seed, stream::direction, k);
        Vector u(d);
        for (int i = 0; i < d; ++i) u[i] = dir_rng.normal();
        u /= u.norm();
        const Vector theta = theta_hat + radius * u;
        CdConfig cfg = base_cd_config(
            config, config.cd.starts[0],
            derive_stream(config.seed, stream::misc, 4, k));
        CheckRecord rec = drift_check(family, kernel, data, theta, cfg,
                                      constants, dg.drift_replicates);
        rec.inputs["radius_multiplier"] = dg.drift_radius_multipliers[k];
        records.push_back(std::move(rec));
      }
    }
    if (enabled("hitting")) {
      BallSpec ball;
      ball.center = theta_hat;
      ball.beta = beta;
      ball.radius = beta * constants.r_n;
      std::vector<Vector> starts;
      for (const Vector& z : config.cd.starts)
        if ((z - ball.center).norm() > ball.radius) starts.push_back(z);
      if (starts.empty()) {
        CheckRecord rec;
        rec.check = "hitting_time";
        rec.flags.push_back("no-start-outside-ball");
        rec.pass = true;
        records.push_back(std::move(rec));
      } else {
        CdConfig cfg = base_cd_config(
            config, starts[0], derive_stream(config.seed, stream::misc, 5));
        auto recs =
            hitting_time_check(family, kernel, data, cfg, constants, ball,
                               starts, dg.hitting_replicates,
                               dg.hitting_horizon_cap);
        for (CheckRecord& rec : recs) records.push_back(std::move(rec));
      }
    }
    if (enabled("concentration")) {
      CdConfig cfg = base_cd_config(
          config, config.cd.starts[0],
          derive_stream(config.seed, stream::misc, 6));
      records.push_back(concentration_report(
          family, kernel, data, cfg, constants, beta, dg.concentration_steps,
          dg.concentration_burn_in));
    }
  }

  if (enabled("lattice") && family.enumerable_states() > 0 &&
      family.stat_bound_exact()) {
    CdConfig cfg = base_cd_config(config, config.cd.starts[0],
                                  derive_stream(config.seed, stream::misc, 7));
    cfg.steps = static_cast<int>(dg.lattice_steps);
    const Trajectory traj = run_cd(family, kernel, data, cfg);
    records.push_back(lattice_check(traj, family, data, dg.lattice_tolerance));
  }

  const std::string stem = "diagnostics_" + std::to_string(config.seed);
  write_file_atomic(out_path(config, stem + ".json"), records_json(records));
  write_file_atomic(out_path(config, stem + ".csv"), records_csv(records));
  write_manifest(config, opt, "diagnose", {stem + ".json", stem + ".csv"},
                 Json::object());

  for (const CheckRecord& rec : records)
    if (!rec.pass) return 1;
  return 0;
}

int cmd_sweep(const ExperimentConfig& config, const CliOptions& opt,
              const Family& family, const Kernel& kernel) {
  if (!config.sweep)
    throw ConfigError("sweep requires a config.sweep block");
  const CdConfig tmpl = base_cd_config(config, config.cd.starts[0], 0);
  const SweepResult result =
      ergodic_sweep(family, kernel, config.data.theta_star,
                    config.sweep->n_list, tmpl, config.sweep->seeds_per_n,
                    config.seed);
  const std::string name =
      "sweep_" + std::to_string(config.seed) + ".csv";
  write_file_atomic(out_path(config, name), sweep_csv(result));
  Json extra;
  extra["seeds_per_n"] = config.sweep->seeds_per_n;
  write_manifest(config, opt, "sweep", {name}, std::move(extra));
  return 0;
}

int dispatch(const std::string& command, const CliOptions& opt) {
  const ExperimentConfig config = resolve_config(opt);
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + config.out_dir +
                      "'");
  const std::unique_ptr<Family> family = build_family(config);
  const std::unique_ptr<Kernel> kernel = build_kernel(config, *family);
  if (command == "sweep") return cmd_sweep(config, opt, *family, *kernel);
  const Matrix data = family->sample_data(
      config.data.theta_star, static_cast<int>(config.data.n),
      config.data.seed);
  if (command == "run") return cmd_run(config, opt, *family, *kernel, data);
  if (command == "gradient-field")
    return cmd_gradient_field(config, opt, *family, *kernel, data);
  return cmd_diagnose(config, opt, *family, *kernel, data);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive-divergence inference lab"};
  app.require_subcommand(1);
  CliOptions opt;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Path to a JSON config file");
    sub->add_option("--preset", opt.preset, "Name of a shipped preset");
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--seed", opt.seed, "Master seed override")
        ->each([&](const std::string&) { opt.has_seed = true; });
    sub->add_option("--jobs", opt.jobs, "Worker threads for independent runs");
  };
  add_common(app.add_subcommand("run", "Run CD trajectories"));
  add_common(app.add_subcommand(
      "gradient-field", "Tabulate exact and CD gradients on a grid"));
  add_common(app.add_subcommand("diagnose", "Run the diagnostics suite"));
  add_common(app.add_subcommand("sweep", "Ergodic-average error sweep over n"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
