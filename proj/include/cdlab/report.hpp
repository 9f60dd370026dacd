#pragma once

#include <string>
#include <vector>

#include "cdlab/diagnostics.hpp"

namespace cdlab {

// 17-significant-digit float formatting shared by every CSV writer; parsing
// the text back recovers the exact double.
std::string format_g17(double v);

// RFC-4180 quoting: cells containing commas, quotes or newlines are wrapped
// and inner quotes doubled; everything else passes through.
std::string csv_quote(const std::string& cell);

// Writes content to a temporary file in the same directory and renames it
// into place, so a crash never leaves a partial artifact.
void write_file_atomic(const std::string& path, const std::string& content);

// t,theta_1..d,gcd_1..d with LF endings; row t holds theta_t and the gradient
// that produced it (zeros at t = 0).
std::string trajectory_csv(const Trajectory& traj);

// Companion mean-parameter path t,mu_1..d with mu = Sigma0 theta.
std::string mean_path_csv(const Trajectory& traj, const Matrix& sigma0);

// One row per record: check,inputs,bound,estimate,std_error,replicates,pass,
// flags; inputs and flags are JSON-in-a-cell.
std::string records_csv(const std::vector<CheckRecord>& records);
std::string records_json(const std::vector<CheckRecord>& records);

// n plus median/q1/q3 of the total error and the three triangle terms.
std::string sweep_csv(const SweepResult& result);

}  // namespace cdlab
