#include "cdlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cdlab {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
}

std::string trajectory_csv(const Trajectory& traj) {
  const int d = static_cast<int>(traj.thetas.front().size());
  std::string out = "t";
  for (int k = 1; k <= d; ++k) out += ",theta_" + std::to_string(k);
  for (int k = 1; k <= d; ++k) out += ",gcd_" + std::to_string(k);
  out += '\n';
  for (std::size_t t = 0; t < traj.thetas.size(); ++t) {
    out += std::to_string(t);
    for (int k = 0; k < d; ++k) out += "," + format_g17(traj.thetas[t][k]);
    for (int k = 0; k < d; ++k)
      out += "," + format_g17(t == 0 ? 0.0 : traj.cd_grads[t - 1][k]);
    out += '\n';
  }
  return out;
}

std::string mean_path_csv(const Trajectory& traj, const Matrix& sigma0) {
  const int d = static_cast<int>(traj.thetas.front().size());
  std::string out = "t";
  for (int k = 1; k <= d; ++k) out += ",mu_" + std::to_string(k);
  out += '\n';
  for (std::size_t t = 0; t < traj.thetas.size(); ++t) {
    const Vector mu = sigma0 * traj.thetas[t];
    out += std::to_string(t);
    for (int k = 0; k < d; ++k) out += "," + format_g17(mu[k]);
    out += '\n';
  }
  return out;
}

std::string records_csv(const std::vector<CheckRecord>& records) {
  std::string out =
      "check,inputs,bound,estimate,std_error,replicates,pass,flags\n";
  for (const CheckRecord& rec : records) {
    out += csv_quote(rec.check);
    out += "," + csv_quote(rec.inputs.dump());
    out += "," + format_g17(rec.bound);
    out += "," + format_g17(rec.estimate);
    out += "," + format_g17(rec.std_error);
    out += "," + std::to_string(rec.replicates);
    out += rec.pass ? ",true" : ",false";
    out += "," + csv_quote(Json(rec.flags).dump());
    out += '\n';
  }
  return out;
}

std::string records_json(const std::vector<CheckRecord>& records) {
  Json arr = Json::array();
  for (const CheckRecord& rec : records) arr.push_back(rec.to_json());
  return arr.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "n,median_total,q1_total,q3_total,median_term1,q1_term1,q3_term1,"
      "median_term2,q1_term2,q3_term2,median_term3,q1_term3,q3_term3\n";
  for (const SweepRow& r : result.rows) {
    out += std::to_string(r.n);
    for (double v : {r.median_total, r.q1_total, r.q3_total, r.median_term1,
                     r.q1_term1, r.q3_term1, r.median_term2, r.q1_term2,
                     r.q3_term2, r.median_term3, r.q1_term3, r.q3_term3})
      out += "," + format_g17(v);
    out += '\n';
  }
  return out;
}

}  // namespace cdlab
