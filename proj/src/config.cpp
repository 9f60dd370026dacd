#include "cdlab/config.hpp"

#include <climits>
#include <fstream>
#include <initializer_list>
#include <set>

namespace cdlab {

namespace {

void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  expect_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("unknown key '" + path + "." + it.key() + "'");
  }
}

const Json& require(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("missing required key '" + path + "." + key + "'");
  return *it;
}

double as_double(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

long as_long(const Json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ConfigError(path + ": expected an integer");
  return j.get<long>();
}

int as_int(const Json& j, const std::string& path) {
  const long v = as_long(j, path);
  if (v < INT_MIN || v > INT_MAX) throw ConfigError(path + ": out of range");
  return static_cast<int>(v);
}

std::uint64_t as_seed(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0)
    return static_cast<std::uint64_t>(j.get<long long>());
  throw ConfigError(path + ": expected a nonnegative integer");
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path + ": expected a boolean");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

Vector as_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<int>(i)] = as_double(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix as_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    throw ConfigError(path + ": expected an array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ConfigError(path + ": expected nonempty rows");
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = as_vector(j[r], path + "[" + std::to_string(r) + "]");
    if (static_cast<std::size_t>(row.size()) != cols)
      throw ConfigError(path + ": ragged rows");
    m.row(static_cast<int>(r)) = row.transpose();
  }
  return m;
}

ParamDomain as_domain(const Json& j, const std::string& path, int dim) {
  check_keys(j, path, {"lower", "upper"});
  const Vector lower = as_vector(require(j, path, "lower"), path + ".lower");
  const Vector upper = as_vector(require(j, path, "upper"), path + ".upper");
  if (lower.size() != dim || upper.size() != dim)
    throw ConfigError(path + ": dimension mismatch (expected " +
                      std::to_string(dim) + ")");
  for (int i = 0; i < dim; ++i)
    if (!(lower[i] < upper[i]))
      throw ConfigError(path + ": lower must be strictly below upper");
  return ParamDomain(lower, upper);
}

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json matrix_json(const Matrix& m) {
  Json a = Json::array();
  for (int r = 0; r < m.rows(); ++r) a.push_back(vector_json(m.row(r)));
  return a;
}

Json domain_json(const ParamDomain& d) {
  Json j;
  j["lower"] = vector_json(d.lower);
  j["upper"] = vector_json(d.upper);
  return j;
}

const std::set<std::string>& known_checks() {
  static const std::set<std::string> s = {
      "constants", "constraints",   "bias",   "variance",
      "drift",     "concentration", "hitting", "lattice"};
  return s;
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  check_keys(j, "config",
             {"seed", "family", "kernel", "data", "cd", "diagnostics", "grid",
              "sweep", "output", "long_running"});
  ExperimentConfig c;
  if (j.contains("seed")) c.seed = as_seed(j["seed"], "config.seed");
  if (j.contains("long_running"))
    c.long_running = as_bool(j["long_running"], "config.long_running");

  // family
  {
    const Json& f = require(j, "config", "family");
    expect_object(f, "config.family");
    c.family.name = as_string(require(f, "config.family", "name"),
                              "config.family.name");
    if (c.family.name == "gaussian_mean") {
      check_keys(f, "config.family", {"name", "sigma0", "stat_bound_c"});
      c.family.sigma0 = as_matrix(require(f, "config.family", "sigma0"),
                                  "config.family.sigma0");
      if (c.family.sigma0.rows() != c.family.sigma0.cols())
        throw ConfigError("config.family.sigma0: must be square");
      if (f.contains("stat_bound_c")) {
        c.family.stat_bound_c =
            as_double(f["stat_bound_c"], "config.family.stat_bound_c");
        if (c.family.stat_bound_c <= 0.0)
          throw ConfigError("config.family.stat_bound_c: must be positive");
      }
    } else if (c.family.name == "binary_rbm") {
      check_keys(f, "config.family", {"name", "nv", "nh"});
      if (f.contains("nv")) c.family.nv = as_int(f["nv"], "config.family.nv");
      if (f.contains("nh")) c.family.nh = as_int(f["nh"], "config.family.nh");
      if (c.family.nv < 1 || c.family.nh < 1)
        throw ConfigError("config.family: nv and nh must be >= 1");
    } else {
      throw ConfigError("config.family.name: unknown family '" +
                        c.family.name + "'");
    }
  }

  std::unique_ptr<Family> family = build_family(c);
  const int d = family->dim();

  // kernel
  {
    const Json& k = require(j, "config", "kernel");
    check_keys(k, "config.kernel", {"name"});
    c.kernel = as_string(require(k, "config.kernel", "name"),
                         "config.kernel.name");
    if (c.kernel == "gaussian_gibbs") {
      if (c.family.name != "gaussian_mean")
        throw ConfigError("config.kernel.name: gaussian_gibbs needs family "
                          "gaussian_mean");
    } else if (c.kernel == "rbm_gibbs") {
      if (c.family.name != "binary_rbm")
        throw ConfigError("config.kernel.name: rbm_gibbs needs family "
                          "binary_rbm");
    } else if (c.kernel != "exact_resample") {
      throw ConfigError("config.kernel.name: unknown kernel '" + c.kernel +
                        "'");
    }
  }

  // data
  {
    const Json& dblock = require(j, "config", "data");
    check_keys(dblock, "config.data", {"theta_star", "n", "seed"});
    c.data.theta_star = as_vector(require(dblock, "config.data", "theta_star"),
                                  "config.data.theta_star");
    if (c.data.theta_star.size() != d)
      throw ConfigError("config.data.theta_star: expected dimension " +
                        std::to_string(d));
    c.data.n = as_long(require(dblock, "config.data", "n"), "config.data.n");
    if (c.data.n < 1) throw ConfigError("config.data.n: must be >= 1");
    if (dblock.contains("seed"))
      c.data.seed = as_seed(dblock["seed"], "config.data.seed");
  }

  // cd
  {
    const Json& cd = require(j, "config", "cd");
    check_keys(cd, "config.cd",
               {"eta", "m", "steps", "starts", "projection", "domain"});
    c.cd.eta = c.family.name == "binary_rbm" ? 0.01 : 0.1;
    if (cd.contains("eta")) c.cd.eta = as_double(cd["eta"], "config.cd.eta");
    if (!(c.cd.eta > 0.0)) throw ConfigError("config.cd.eta: must be positive");
    if (cd.contains("m")) c.cd.m = as_int(cd["m"], "config.cd.m");
    if (c.cd.m < 1) throw ConfigError("config.cd.m: must be >= 1");
    if (cd.contains("steps"))
      c.cd.steps = as_int(cd["steps"], "config.cd.steps");
    if (c.cd.steps < 0) throw ConfigError("config.cd.steps: must be >= 0");
    if (cd.contains("projection"))
      c.cd.projection = as_bool(cd["projection"], "config.cd.projection");
    c.cd.domain = cd.contains("domain")
                      ? as_domain(cd["domain"], "config.cd.domain", d)
                      : family->default_domain();
    const Json& starts = require(cd, "config.cd", "starts");
    if (!starts.is_array() || starts.empty())
      throw ConfigError("config.cd.starts: expected a nonempty array");
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const std::string path =
          "config.cd.starts[" + std::to_string(i) + "]";
      Vector s = as_vector(starts[i], path);
      if (s.size() != d)
        throw ConfigError(path + ": expected dimension " + std::to_string(d));
      if (!c.cd.domain.contains(s))
        throw ConfigError(path + ": outside config.cd.domain");
      c.cd.starts.push_back(std::move(s));
    }
  }

  // diagnostics
  {
    DiagnosticsBlock& g = c.diagnostics;
    g.constants_domain = c.cd.domain;
    if (j.contains("diagnostics")) {
      const Json& dg = j["diagnostics"];
      check_keys(dg, "config.diagnostics",
                 {"gamma1", "gamma2", "constants_domain",
                  "constants_grid_points", "alpha_grid_points",
                  "alpha_chain_length", "replicates",
                  "drift_radius_multipliers", "drift_replicates",
                  "hitting_replicates", "hitting_horizon_cap",
                  "concentration_steps", "concentration_burn_in",
                  "lattice_steps", "lattice_tolerance",
                  "constraints_grid_points", "checks"});
      if (dg.contains("gamma1"))
        g.gamma1 = as_double(dg["gamma1"], "config.diagnostics.gamma1");
      if (!(g.gamma1 > 0.0 && g.gamma1 < 0.5))
        throw ConfigError("config.diagnostics.gamma1: must lie in (0, 1/2)");
      if (dg.contains("gamma2"))
        g.gamma2 = as_double(dg["gamma2"], "config.diagnostics.gamma2");
      if (!(g.gamma2 > 0.0 && g.gamma2 < 0.5 - g.gamma1))
        throw ConfigError(
            "config.diagnostics.gamma2: must lie in (0, 1/2 - gamma1)");
      if (dg.contains("constants_domain"))
        g.constants_domain = as_domain(dg["constants_domain"],
                                       "config.diagnostics.constants_domain",
                                       d);
      if (dg.contains("constants_grid_points"))
        g.constants_grid_points =
            as_int(dg["constants_grid_points"],
                   "config.diagnostics.constants_grid_points");
      if (g.constants_grid_points < 3)
        throw ConfigError(
            "config.diagnostics.constants_grid_points: must be >= 3");
      if (dg.contains("alpha_grid_points"))
        g.alpha_grid_points = as_int(dg["alpha_grid_points"],
                                     "config.diagnostics.alpha_grid_points");
      if (g.alpha_grid_points < 2)
        throw ConfigError("config.diagnostics.alpha_grid_points: must be >= 2");
      if (dg.contains("alpha_chain_length"))
        g.alpha_chain_length = as_long(dg["alpha_chain_length"],
                                       "config.diagnostics.alpha_chain_length");
      if (g.alpha_chain_length < 1000)
        throw ConfigError(
            "config.diagnostics.alpha_chain_length: must be >= 1000");
      if (dg.contains("replicates"))
        g.replicates = as_long(dg["replicates"],
                               "config.diagnostics.replicates");
      if (g.replicates < 1000)
        throw ConfigError("config.diagnostics.replicates: must be >= 1000");
      if (dg.contains("drift_radius_multipliers")) {
        const Json& mults = dg["drift_radius_multipliers"];
        if (!mults.is_array() || mults.empty())
          throw ConfigError(
              "config.diagnostics.drift_radius_multipliers: expected a "
              "nonempty array");
        g.drift_radius_multipliers.clear();
        for (std::size_t i = 0; i < mults.size(); ++i) {
          const double v = as_double(
              mults[i], "config.diagnostics.drift_radius_multipliers[" +
                            std::to_string(i) + "]");
          if (!(v > 0.0))
            throw ConfigError(
                "config.diagnostics.drift_radius_multipliers: must be "
                "positive");
          g.drift_radius_multipliers.push_back(v);
        }
      }
      if (dg.contains("drift_replicates"))
        g.drift_replicates = as_long(dg["drift_replicates"],
                                     "config.diagnostics.drift_replicates");
      if (g.drift_replicates < 1000)
        throw ConfigError(
            "config.diagnostics.drift_replicates: must be >= 1000");
      if (dg.contains("hitting_replicates"))
        g.hitting_replicates = as_long(dg["hitting_replicates"],
                                       "config.diagnostics.hitting_replicates");
      if (g.hitting_replicates < 1)
        throw ConfigError(
            "config.diagnostics.hitting_replicates: must be >= 1");
      if (dg.contains("hitting_horizon_cap"))
        g.hitting_horizon_cap =
            as_long(dg["hitting_horizon_cap"],
                    "config.diagnostics.hitting_horizon_cap");
      if (g.hitting_horizon_cap < 1)
        throw ConfigError(
            "config.diagnostics.hitting_horizon_cap: must be >= 1");
      if (dg.contains("concentration_steps"))
        g.concentration_steps =
            as_long(dg["concentration_steps"],
                    "config.diagnostics.concentration_steps");
      if (dg.contains("concentration_burn_in"))
        g.concentration_burn_in =
            as_long(dg["concentration_burn_in"],
                    "config.diagnostics.concentration_burn_in");
      if (g.concentration_burn_in < 0 ||
          g.concentration_burn_in >= g.concentration_steps)
        throw ConfigError(
            "config.diagnostics.concentration_burn_in: need 0 <= burn_in < "
            "concentration_steps");
      if (dg.contains("lattice_steps"))
        g.lattice_steps = as_long(dg["lattice_steps"],
                                  "config.diagnostics.lattice_steps");
      if (g.lattice_steps < 1)
        throw ConfigError("config.diagnostics.lattice_steps: must be >= 1");
      if (dg.contains("lattice_tolerance"))
        g.lattice_tolerance = as_double(dg["lattice_tolerance"],
                                        "config.diagnostics.lattice_tolerance");
      if (!(g.lattice_tolerance > 0.0))
        throw ConfigError(
            "config.diagnostics.lattice_tolerance: must be positive");
      if (dg.contains("constraints_grid_points"))
        g.constraints_grid_points =
            as_int(dg["constraints_grid_points"],
                   "config.diagnostics.constraints_grid_points");
      if (g.constraints_grid_points < 2)
        throw ConfigError(
            "config.diagnostics.constraints_grid_points: must be >= 2");
      if (dg.contains("checks")) {
        const Json& checks = dg["checks"];
        if (!checks.is_array())
          throw ConfigError("config.diagnostics.checks: expected an array");
        for (std::size_t i = 0; i < checks.size(); ++i) {
          const std::string name =
              as_string(checks[i], "config.diagnostics.checks[" +
                                       std::to_string(i) + "]");
          if (known_checks().count(name) == 0)
            throw ConfigError("config.diagnostics.checks: unknown check '" +
                              name + "'");
          g.checks.push_back(name);
        }
      }
    }
  }

  // grid
  if (j.contains("grid")) {
    const Json& gr = j["grid"];
    check_keys(gr, "config.grid", {"lower", "upper", "points", "replicates"});
    GridBlock g;
    if (c.family.name == "binary_rbm") {
      g.lower = Vector::Zero(d);
      g.upper = Vector::Ones(d);
    } else {
      g.lower = c.cd.domain.lower;
      g.upper = c.cd.domain.upper;
    }
    if (gr.contains("lower")) g.lower = as_vector(gr["lower"], "config.grid.lower");
    if (gr.contains("upper")) g.upper = as_vector(gr["upper"], "config.grid.upper");
    if (g.lower.size() != d || g.upper.size() != d)
      throw ConfigError("config.grid: expected dimension " + std::to_string(d));
    for (int i = 0; i < d; ++i)
      if (!(g.lower[i] < g.upper[i]))
        throw ConfigError("config.grid: lower must be strictly below upper");
    if (gr.contains("points"))
      g.points = as_int(gr["points"], "config.grid.points");
    if (g.points < 2) throw ConfigError("config.grid.points: must be >= 2");
    if (gr.contains("replicates"))
      g.replicates = as_int(gr["replicates"], "config.grid.replicates");
    if (g.replicates < 1)
      throw ConfigError("config.grid.replicates: must be >= 1");
    c.grid = g;
  }

  // sweep
  if (j.contains("sweep")) {
    const Json& sw = j["sweep"];
    check_keys(sw, "config.sweep", {"n_list", "seeds_per_n"});
    SweepBlock s;
    const Json& nl = require(sw, "config.sweep", "n_list");
    if (!nl.is_array() || nl.size() < 2)
      throw ConfigError("config.sweep.n_list: expected an array of >= 2 sizes");
    for (std::size_t i = 0; i < nl.size(); ++i) {
      const long n = as_long(nl[i], "config.sweep.n_list[" +
                                        std::to_string(i) + "]");
      if (n < 1) throw ConfigError("config.sweep.n_list: sizes must be >= 1");
      if (!s.n_list.empty() && n <= s.n_list.back())
        throw ConfigError("config.sweep.n_list: must be strictly increasing");
      s.n_list.push_back(n);
    }
    if (sw.contains("seeds_per_n"))
      s.seeds_per_n = as_int(sw["seeds_per_n"], "config.sweep.seeds_per_n");
    if (s.seeds_per_n < 20)
      throw ConfigError(
          "config.sweep.seeds_per_n: medians need >= 20 seeds per n");
    c.sweep = s;
  }

  // output
  if (j.contains("output")) {
    const Json& out = j["output"];
    check_keys(out, "config.output", {"dir"});
    if (out.contains("dir"))
      c.out_dir = as_string(out["dir"], "config.output.dir");
  }

  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " +
                      e.what());
  }
  return parse_config(j);
}

namespace {

Json gaussian_preset(long n, std::uint64_t data_seed) {
  Json j;
  j["seed"] = 1;
  j["family"]["name"] = "gaussian_mean";
  j["family"]["sigma0"] = Json::array({Json::array({1.0, 0.5}),
                                       Json::array({0.5, 1.0})});
  j["family"]["stat_bound_c"] = 6.0;
  j["kernel"]["name"] = "gaussian_gibbs";
  j["data"]["theta_star"] = Json::array({0.0, 0.0});
  j["data"]["n"] = n;
  j["data"]["seed"] = data_seed;
  j["cd"]["eta"] = 0.1;
  j["cd"]["m"] = 3;
  j["cd"]["steps"] = 2000;
  j["cd"]["starts"] = Json::array({Json::array({3.0, 3.0}),
                                   Json::array({-3.0, 3.0}),
                                   Json::array({3.0, -3.0}),
                                   Json::array({-3.0, -3.0})});
  j["diagnostics"]["gamma1"] = 0.1;
  j["diagnostics"]["gamma2"] = 0.05;
  j["diagnostics"]["constants_domain"]["lower"] = Json::array({-1.0, -1.0});
  j["diagnostics"]["constants_domain"]["upper"] = Json::array({1.0, 1.0});
  j["grid"]["lower"] = Json::array({-4.0, -4.0});
  j["grid"]["upper"] = Json::array({4.0, 4.0});
  j["grid"]["points"] = 5;
  j["grid"]["replicates"] = 5;
  j["sweep"]["n_list"] = Json::array({50, 100, 500});
  j["sweep"]["seeds_per_n"] = 20;
  return j;
}

Json rbm_preset(long n, int steps, std::uint64_t data_seed, bool long_running) {
  Json j;
  j["seed"] = 1;
  j["family"]["name"] = "binary_rbm";
  j["family"]["nv"] = 2;
  j["family"]["nh"] = 2;
  j["kernel"]["name"] = "rbm_gibbs";
  j["data"]["theta_star"] = Json::array({0.5, 0.5, 0.5, 0.5});
  j["data"]["n"] = n;
  j["data"]["seed"] = data_seed;
  j["cd"]["eta"] = 0.2;
  j["cd"]["m"] = 3;
  j["cd"]["steps"] = steps;
  j["cd"]["starts"] = Json::array({Json::array({0.0, 0.0, 0.0, 0.0})});
  j["diagnostics"]["gamma1"] = 0.1;
  j["diagnostics"]["gamma2"] = 0.05;
  j["diagnostics"]["constants_domain"]["lower"] =
      Json::array({0.4, 0.4, 0.4, 0.4});
  j["diagnostics"]["constants_domain"]["upper"] =
      Json::array({0.6, 0.6, 0.6, 0.6});
  j["diagnostics"]["constants_grid_points"] = 5;
  j["diagnostics"]["alpha_grid_points"] = 3;
  j["grid"]["lower"] = Json::array({0.0, 0.0, 0.0, 0.0});
  j["grid"]["upper"] = Json::array({1.0, 1.0, 1.0, 1.0});
  j["grid"]["points"] = 6;
  j["grid"]["replicates"] = 5;
  if (!long_running) {
    j["sweep"]["n_list"] = Json::array({100, 10000});
    j["sweep"]["seeds_per_n"] = 20;
  }
  if (long_running) j["long_running"] = true;
  return j;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"gaussian-n50", "gaussian-n100",  "gaussian-n500",
          "rbm-n100",     "rbm-n10000",     "rbm-n1000000"};
}

ExperimentConfig load_preset(const std::string& name) {
  Json j;
  if (name == "gaussian-n50") {
    j = gaussian_preset(50, 1055);
  } else if (name == "gaussian-n100") {
    j = gaussian_preset(100, 1106);
  } else if (name == "gaussian-n500") {
    j = gaussian_preset(500, 1502);
  } else if (name == "rbm-n100") {
    j = rbm_preset(100, 1500, 2016, false);
  } else if (name == "rbm-n10000") {
    j = rbm_preset(10000, 1500, 2111, false);
  } else if (name == "rbm-n1000000") {
    j = rbm_preset(1000000, 200, 12000, true);
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return parse_config(j);
}

Json resolved_config_json(const ExperimentConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["family"]["name"] = c.family.name;
  if (c.family.name == "gaussian_mean") {
    j["family"]["sigma0"] = matrix_json(c.family.sigma0);
    j["family"]["stat_bound_c"] = c.family.stat_bound_c;
  } else {
    j["family"]["nv"] = c.family.nv;
    j["family"]["nh"] = c.family.nh;
  }
  j["kernel"]["name"] = c.kernel;
  j["data"]["theta_star"] = vector_json(c.data.theta_star);
  j["data"]["n"] = c.data.n;
  j["data"]["seed"] = c.data.seed;
  j["cd"]["eta"] = c.cd.eta;
  j["cd"]["m"] = c.cd.m;
  j["cd"]["steps"] = c.cd.steps;
  Json starts = Json::array();
  for (const Vector& s : c.cd.starts) starts.push_back(vector_json(s));
  j["cd"]["starts"] = starts;
  j["cd"]["projection"] = c.cd.projection;
  j["cd"]["domain"] = domain_json(c.cd.domain);
  const DiagnosticsBlock& g = c.diagnostics;
  j["diagnostics"]["gamma1"] = g.gamma1;
  j["diagnostics"]["gamma2"] = g.gamma2;
  j["diagnostics"]["constants_domain"] = domain_json(g.constants_domain);
  j["diagnostics"]["constants_grid_points"] = g.constants_grid_points;
  j["diagnostics"]["alpha_grid_points"] = g.alpha_grid_points;
  j["diagnostics"]["alpha_chain_length"] = g.alpha_chain_length;
  j["diagnostics"]["replicates"] = g.replicates;
  j["diagnostics"]["drift_radius_multipliers"] = g.drift_radius_multipliers;
  j["diagnostics"]["drift_replicates"] = g.drift_replicates;
  j["diagnostics"]["hitting_replicates"] = g.hitting_replicates;
  j["diagnostics"]["hitting_horizon_cap"] = g.hitting_horizon_cap;
  j["diagnostics"]["concentration_steps"] = g.concentration_steps;
  j["diagnostics"]["concentration_burn_in"] = g.concentration_burn_in;
  j["diagnostics"]["lattice_steps"] = g.lattice_steps;
  j["diagnostics"]["lattice_tolerance"] = g.lattice_tolerance;
  j["diagnostics"]["constraints_grid_points"] = g.constraints_grid_points;
  if (!g.checks.empty()) j["diagnostics"]["checks"] = g.checks;
  if (c.grid) {
    j["grid"]["lower"] = vector_json(c.grid->lower);
    j["grid"]["upper"] = vector_json(c.grid->upper);
    j["grid"]["points"] = c.grid->points;
    j["grid"]["replicates"] = c.grid->replicates;
  }
  if (c.sweep) {
    j["sweep"]["n_list"] = c.sweep->n_list;
    j["sweep"]["seeds_per_n"] = c.sweep->seeds_per_n;
  }
  if (c.long_running) j["long_running"] = true;
  return j;
}

std::unique_ptr<Family> build_family(const ExperimentConfig& c) {
  if (c.family.name == "gaussian_mean")
    return make_gaussian_mean(c.family.sigma0, c.family.stat_bound_c);
  return make_binary_rbm(c.family.nv, c.family.nh);
}

std::unique_ptr<Kernel> build_kernel(const ExperimentConfig& c,
                                     const Family& family) {
  if (c.kernel == "gaussian_gibbs")
    return std::make_unique<GaussianGibbsKernel>(c.family.sigma0);
  if (c.kernel == "rbm_gibbs")
    return std::make_unique<RbmGibbsKernel>(c.family.nv, c.family.nh);
  return std::make_unique<ExactResampleKernel>(family);
}

}  // namespace cdlab
