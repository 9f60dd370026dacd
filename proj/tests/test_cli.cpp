// End-to-end tests of the command-line tool: exit codes, file layout,
// manifest round trips, and byte-level determinism.  Each case drives the
// installed binary through std::system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cdlab/config.hpp"

namespace fs = std::filesystem;
using cdlab::Json;

namespace {

const fs::path& work_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "cdlab_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = work_root() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_raw(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

int run_cli(const std::string& args) {
  return run_raw(std::string(CDLAB_CLI_PATH) + " " + args);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

fs::path write_config(const std::string& name, const Json& j) {
  const fs::path p = work_root() / name;
  std::ofstream out(p);
  out << j.dump(2);
  return p;
}

// Small, fast configurations used throughout.
Json tiny_gaussian() {
  Json j;
  j["seed"] = 1;
  j["family"]["name"] = "gaussian_mean";
  j["family"]["sigma0"] =
      Json::array({Json::array({1.0, 0.5}), Json::array({0.5, 1.0})});
  j["kernel"]["name"] = "exact_resample";
  j["data"]["theta_star"] = Json::array({0.0, 0.0});
  j["data"]["n"] = 40;
  j["data"]["seed"] = 9;
  j["cd"]["eta"] = 0.1;
  j["cd"]["m"] = 1;
  j["cd"]["steps"] = 5;
  j["cd"]["starts"] = Json::array({Json::array({1.0, 1.0})});
  return j;
}

Json tiny_rbm() {
  Json j;
  j["seed"] = 1;
  j["family"]["name"] = "binary_rbm";
  j["family"]["nv"] = 2;
  j["family"]["nh"] = 2;
  j["kernel"]["name"] = "rbm_gibbs";
  j["data"]["theta_star"] = Json::array({0.5, 0.5, 0.5, 0.5});
  j["data"]["n"] = 20;
  j["data"]["seed"] = 3;
  j["cd"]["eta"] = 0.2;
  j["cd"]["m"] = 1;
  j["cd"]["steps"] = 5;
  j["cd"]["starts"] = Json::array({Json::array({0.0, 0.0, 0.0, 0.0})});
  return j;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run on a preset writes trajectories, companions and a manifest") {
    const fs::path dir_a = fresh_dir("run_a");
    REQUIRE(run_cli("run --preset gaussian-n50 --out " + dir_a.string()) == 0);

    const std::vector<std::string> traj_names = {
        "traj_3x3_1.csv", "traj_-3x3_1.csv", "traj_3x-3_1.csv",
        "traj_-3x-3_1.csv"};
    for (const std::string& name : traj_names) {
      CAPTURE(name);
      REQUIRE(fs::exists(dir_a / name));
      const std::string mu =
          name.substr(0, name.size() - 4) + "_mu.csv";
      CHECK(fs::exists(dir_a / mu));
    }

    const std::string traj = slurp(dir_a / "traj_3x3_1.csv");
    CHECK(traj.find('\r') == std::string::npos);
    const auto lines = lines_of(traj);
    REQUIRE(lines.size() == 2002);  // header + steps 0..2000
    CHECK(lines[0] == "t,theta_1,theta_2,gcd_1,gcd_2");
    CHECK(lines[1] == "0,3,3,0,0");

    const std::string mu = slurp(dir_a / "traj_3x3_1_mu.csv");
    const auto mu_lines = lines_of(mu);
    REQUIRE(mu_lines.size() == 2002);
    CHECK(mu_lines[0] == "t,mu_1,mu_2");
    CHECK(mu_lines[1] == "0,4.5,4.5");  // Sigma0 * (3,3)

    REQUIRE(fs::exists(dir_a / "manifest_run_1.json"));
    const Json manifest = Json::parse(slurp(dir_a / "manifest_run_1.json"));
    CHECK(manifest["version"] == "0.1.0");
    CHECK(manifest["command"] == "run");
    CHECK(manifest["preset"] == "gaussian-n50");
    REQUIRE(manifest["files"].size() == 8);
    // The embedded config is fully resolved: parsing it back and resolving
    // again is the identity.
    const cdlab::ExperimentConfig parsed =
        cdlab::parse_config(manifest["config"]);
    CHECK(cdlab::resolved_config_json(parsed) == manifest["config"]);

    SUBCASE("a second run is byte-identical") {
      const fs::path dir_b = fresh_dir("run_b");
      REQUIRE(run_cli("run --preset gaussian-n50 --out " + dir_b.string()) ==
              0);
      for (const auto& entry : fs::directory_iterator(dir_a)) {
        const std::string name = entry.path().filename().string();
        CAPTURE(name);
        REQUIRE(fs::exists(dir_b / name));
        CHECK(slurp(entry.path()) == slurp(dir_b / name));
      }
    }
  }

  TEST_CASE("seed override renames artifacts and changes the streams") {
    const fs::path dir_a = fresh_dir("seed_a");
    const fs::path dir_b = fresh_dir("seed_b");
    const fs::path cfg = write_config("tiny_gaussian.json", tiny_gaussian());
    REQUIRE(run_cli("run --config " + cfg.string() + " --out " +
                    dir_a.string()) == 0);
    REQUIRE(run_cli("run --config " + cfg.string() + " --seed 7 --out " +
                    dir_b.string()) == 0);
    CHECK(fs::exists(dir_a / "traj_1x1_1.csv"));
    CHECK(fs::exists(dir_b / "traj_1x1_7.csv"));
    CHECK(fs::exists(dir_b / "manifest_run_7.json"));
    // Same data seed, different master seed: the CD streams differ.
    CHECK(slurp(dir_a / "traj_1x1_1.csv") !=
          slurp(dir_b / "traj_1x1_7.csv"));
    const Json manifest = Json::parse(slurp(dir_b / "manifest_run_7.json"));
    CHECK(manifest["config"]["seed"] == 7);
    CHECK(manifest.contains("preset") == false);
  }

  TEST_CASE("the manifest config reproduces the run byte for byte") {
    const fs::path dir_a = fresh_dir("mani_a");
    const fs::path cfg = write_config("mani.json", tiny_rbm());
    REQUIRE(run_cli("run --config " + cfg.string() + " --out " +
                    dir_a.string()) == 0);
    const Json manifest = Json::parse(slurp(dir_a / "manifest_run_1.json"));
    const fs::path cfg2 = write_config("mani_resolved.json",
                                       manifest["config"]);
    const fs::path dir_b = fresh_dir("mani_b");
    REQUIRE(run_cli("run --config " + cfg2.string() + " --out " +
                    dir_b.string()) == 0);
    CHECK(slurp(dir_a / "traj_0x0x0x0_1.csv") ==
          slurp(dir_b / "traj_0x0x0x0_1.csv"));
  }

  TEST_CASE("output directory precedence: flag, config, environment") {
    const fs::path env_dir = fresh_dir("out_env");
    const fs::path flag_dir = fresh_dir("out_flag");
    const fs::path cfg_dir = fresh_dir("out_cfg");
    const fs::path cfg = write_config("outprec.json", tiny_gaussian());

    // Environment only.
    REQUIRE(run_raw("CDLAB_OUT=" + env_dir.string() + " " + CDLAB_CLI_PATH +
                    " run --config " + cfg.string()) == 0);
    CHECK(fs::exists(env_dir / "traj_1x1_1.csv"));

    // --out beats the environment.
    REQUIRE(run_raw("CDLAB_OUT=" + env_dir.string() + " " + CDLAB_CLI_PATH +
                    " run --config " + cfg.string() + " --out " +
                    flag_dir.string()) == 0);
    CHECK(fs::exists(flag_dir / "traj_1x1_1.csv"));

    // config.output.dir beats the environment.
    Json with_dir = tiny_gaussian();
    with_dir["output"]["dir"] = cfg_dir.string();
    const fs::path cfg2 = write_config("outprec2.json", with_dir);
    const fs::path env2 = fresh_dir("out_env2");
    REQUIRE(run_raw("CDLAB_OUT=" + env2.string() + " " + CDLAB_CLI_PATH +
                    " run --config " + cfg2.string()) == 0);
    CHECK(fs::exists(cfg_dir / "traj_1x1_1.csv"));
    CHECK(!fs::exists(env2 / "traj_1x1_1.csv"));
  }

  TEST_CASE("configuration problems exit with code 2") {
    const fs::path dir = fresh_dir("errs");
    CHECK(run_cli("run") == 2);  // neither --config nor --preset
    const fs::path cfg = write_config("err_base.json", tiny_gaussian());
    CHECK(run_cli("run --config " + cfg.string() +
                  " --preset gaussian-n50") == 2);
    CHECK(run_cli("run --preset gaussian-n9999") == 2);
    CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 2);

    Json bad = tiny_gaussian();
    bad["cd"]["etaa"] = 0.5;
    const fs::path bad_cfg = write_config("err_unknown.json", bad);
    CHECK(run_cli("run --config " + bad_cfg.string()) == 2);

    const fs::path not_json = work_root() / "err_parse.json";
    {
      std::ofstream out(not_json);
      out << "{ nope";
    }
    CHECK(run_cli("run --config " + not_json.string()) == 2);

    // Commands that need an optional block refuse configs without it.
    CHECK(run_cli("gradient-field --config " + cfg.string() + " --out " +
                  dir.string()) == 2);
    CHECK(run_cli("sweep --config " + cfg.string() + " --out " +
                  dir.string()) == 2);

    // Command-line parse failures.
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("run --confg x.json") == 2);
    CHECK(run_cli("--help") == 0);
  }

  TEST_CASE("gradient-field tabulates rbm pair projections") {
    const fs::path dir = fresh_dir("field_rbm");
    Json j = tiny_rbm();
    j["grid"]["lower"] = Json::array({0.0, 0.0, 0.0, 0.0});
    j["grid"]["upper"] = Json::array({1.0, 1.0, 1.0, 1.0});
    j["grid"]["points"] = 3;
    j["grid"]["replicates"] = 2;
    const fs::path cfg = write_config("field_rbm.json", j);
    REQUIRE(run_cli("gradient-field --config " + cfg.string() + " --out " +
                    dir.string()) == 0);

    const std::vector<std::string> expected = {
        "field_1x2_1.csv", "field_1x3_1.csv", "field_1x4_1.csv",
        "field_2x3_1.csv", "field_2x4_1.csv", "field_3x4_1.csv"};
    for (const std::string& name : expected) {
      CAPTURE(name);
      CHECK(fs::exists(dir / name));
    }

    const auto lines = lines_of(slurp(dir / "field_1x2_1.csv"));
    REQUIRE(lines.size() == 1 + 3 * 3 * 2);  // header + points^2 * replicates
    CHECK(lines[0] ==
          "theta_1,theta_2,theta_3,theta_4,exact_1,exact_2,exact_3,exact_4,"
          "rep,cd_1,cd_2,cd_3,cd_4,dir_1,dir_2,dir_3,dir_4");
    // Off-pair coordinates are pinned to the grid value nearest 0.5, which
    // for points = 3 on [0,1] is 0.5 itself.
    for (std::size_t i = 1; i < lines.size(); ++i) {
      std::istringstream row(lines[i]);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      REQUIRE(cells.size() == 17);
      CHECK(cells[2] == "0.5");
      CHECK(cells[3] == "0.5");
    }

    const Json manifest =
        Json::parse(slurp(dir / "manifest_gradient-field_1.json"));
    CHECK(manifest["details"]["points_per_dim"] == 3);
    CHECK(manifest["details"]["replicates"] == 2);
    REQUIRE(manifest["files"].size() == 6);
  }

  TEST_CASE("gradient-field on the gaussian emits one table with exact gradients") {
    const fs::path dir = fresh_dir("field_gauss");
    Json j = tiny_gaussian();
    j["grid"]["lower"] = Json::array({-2.0, -2.0});
    j["grid"]["upper"] = Json::array({2.0, 2.0});
    j["grid"]["points"] = 3;
    j["grid"]["replicates"] = 1;
    const fs::path cfg = write_config("field_gauss.json", j);
    REQUIRE(run_cli("gradient-field --config " + cfg.string() + " --out " +
                    dir.string()) == 0);
    const auto lines = lines_of(slurp(dir / "field_1.csv"));
    REQUIRE(lines.size() == 1 + 3 * 3);
    CHECK(lines[0] ==
          "theta_1,theta_2,exact_1,exact_2,rep,cd_1,cd_2,dir_1,dir_2");

    // Cross-check one row against the library: exact_k = phibar_k - (S
    // theta)_k, recovered exactly from the 17-digit text.
    const cdlab::ExperimentConfig config = cdlab::load_config_file(
        cfg.string());
    const auto family = cdlab::build_family(config);
    const cdlab::Matrix data = family->sample_data(
        config.data.theta_star, static_cast<int>(config.data.n),
        config.data.seed);
    const cdlab::Vector phibar = family->mean_suff_stat(data);
    std::istringstream row(lines[1]);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
    REQUIRE(cells.size() == 9);
    cdlab::Vector theta(2);
    theta << cells[0], cells[1];
    const cdlab::Vector exact = family->exact_gradient(phibar, theta);
    CHECK(cells[2] == exact[0]);
    CHECK(cells[3] == exact[1]);
  }

  TEST_CASE("diagnose emits the record set and exits by the check outcome") {
    const fs::path dir = fresh_dir("diag_pass");
    Json j = tiny_gaussian();
    j["data"]["n"] = 200;
    j["diagnostics"]["constants_domain"]["lower"] = Json::array({-1.0, -1.0});
    j["diagnostics"]["constants_domain"]["upper"] = Json::array({1.0, 1.0});
    j["diagnostics"]["constants_grid_points"] = 3;
    j["diagnostics"]["replicates"] = 1000;
    j["diagnostics"]["checks"] =
        Json::array({"constants", "constraints", "bias", "variance"});
    const fs::path cfg = write_config("diag_pass.json", j);
    REQUIRE(run_cli("diagnose --config " + cfg.string() + " --out " +
                    dir.string()) == 0);

    REQUIRE(fs::exists(dir / "diagnostics_1.json"));
    REQUIRE(fs::exists(dir / "diagnostics_1.csv"));
    const Json records = Json::parse(slurp(dir / "diagnostics_1.json"));
    REQUIRE(records.is_array());
    REQUIRE(records.size() == 8);
    CHECK(records[0]["check"] == "drift_constants");
    CHECK(records[0]["inputs"]["alpha_method"] == "exact-zero");
    CHECK(records[1]["check"] == "constraint_moment");
    CHECK(records[2]["check"] == "constraint_mle");
    CHECK(records[3]["check"] == "constraint_empirical_process");
    CHECK(records[4]["check"] == "bias_bound");
    CHECK(records[4]["inputs"]["theta_label"] == "mle");
    CHECK(records[5]["check"] == "bias_bound");
    CHECK(records[5]["inputs"]["theta_label"] == "theta_star");
    CHECK(records[6]["check"] == "variance_bound");
    CHECK(records[7]["check"] == "variance_bound");
    for (const Json& rec : records) {
      CHECK(rec.contains("check"));
      CHECK(rec.contains("inputs"));
      CHECK(rec.contains("bound"));
      CHECK(rec.contains("estimate"));
      CHECK(rec.contains("std_error"));
      CHECK(rec.contains("replicates"));
      CHECK(rec.contains("pass"));
      CHECK(rec.contains("flags"));
      CHECK(rec["pass"] == true);
    }
    const auto csv_lines = lines_of(slurp(dir / "diagnostics_1.csv"));
    REQUIRE(csv_lines.size() == 9);
    CHECK(csv_lines[0] ==
          "check,inputs,bound,estimate,std_error,replicates,pass,flags");
    const Json manifest =
        Json::parse(slurp(dir / "manifest_diagnose_1.json"));
    REQUIRE(manifest["files"].size() == 2);
    CHECK(manifest["files"][0] == "diagnostics_1.json");

    SUBCASE("a failing check exits with code 1") {
      const fs::path fail_dir = fresh_dir("diag_fail");
      Json f = tiny_gaussian();
      f["data"]["n"] = 1;
      f["data"]["seed"] = 5;  // single draw far from the model mean
      f["diagnostics"]["checks"] = Json::array({"constraints"});
      const fs::path fail_cfg = write_config("diag_fail.json", f);
      CHECK(run_cli("diagnose --config " + fail_cfg.string() + " --out " +
                    fail_dir.string()) == 1);
      const Json recs = Json::parse(slurp(fail_dir / "diagnostics_1.json"));
      REQUIRE(recs.size() == 3);
      CHECK(recs[0]["check"] == "constraint_moment");
      CHECK(recs[0]["pass"] == false);
      CHECK(recs[0]["estimate"].get<double>() >
            recs[0]["bound"].get<double>());
    }
  }

  TEST_CASE("sweep writes one quartile row per sample size") {
    const fs::path dir = fresh_dir("sweep");
    Json j = tiny_gaussian();
    j["cd"]["steps"] = 60;
    j["sweep"]["n_list"] = Json::array({20, 40});
    j["sweep"]["seeds_per_n"] = 20;
    const fs::path cfg = write_config("sweep.json", j);
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " +
                    dir.string()) == 0);
    const auto lines = lines_of(slurp(dir / "sweep_1.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "n,median_total,q1_total,q3_total,median_term1,q1_term1,q3_term1,"
          "median_term2,q1_term2,q3_term2,median_term3,q1_term3,q3_term3");
    CHECK(lines[1].rfind("20,", 0) == 0);
    CHECK(lines[2].rfind("40,", 0) == 0);
    const Json manifest = Json::parse(slurp(dir / "manifest_sweep_1.json"));
    CHECK(manifest["details"]["seeds_per_n"] == 20);

    // Sweeps with too few seeds for stable medians are refused at parse time.
    Json bad = tiny_gaussian();
    bad["sweep"]["n_list"] = Json::array({20, 40});
    bad["sweep"]["seeds_per_n"] = 5;
    const fs::path bad_cfg = write_config("sweep_bad.json", bad);
    CHECK(run_cli("sweep --config " + bad_cfg.string() + " --out " +
                  dir.string()) == 2);
  }

  TEST_CASE("zero steps emit a single trajectory row") {
    const fs::path dir = fresh_dir("zero_steps");
    Json j = tiny_gaussian();
    j["cd"]["steps"] = 0;
    const fs::path cfg = write_config("zero.json", j);
    REQUIRE(run_cli("run --config " + cfg.string() + " --out " +
                    dir.string()) == 0);
    const auto lines = lines_of(slurp(dir / "traj_1x1_1.csv"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[1] == "0,1,1,0,0");
  }

  TEST_CASE("parallel runs produce the same bytes as sequential runs") {
    const fs::path seq = fresh_dir("jobs_seq");
    const fs::path par = fresh_dir("jobs_par");
    REQUIRE(run_cli("run --preset gaussian-n50 --out " + seq.string()) == 0);
    REQUIRE(run_cli("run --preset gaussian-n50 --jobs 4 --out " +
                    par.string()) == 0);
    for (const auto& entry : fs::directory_iterator(seq)) {
      const std::string name = entry.path().filename().string();
      CAPTURE(name);
      REQUIRE(fs::exists(par / name));
      CHECK(slurp(entry.path()) == slurp(par / name));
    }
  }
}
