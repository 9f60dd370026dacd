#pragma once

#include <cmath>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "cdlab/param_domain.hpp"

namespace support {

inline cdlab::Vector vec(std::initializer_list<double> values) {
  cdlab::Vector v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

inline double sample_sd(const std::vector<double>& xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1));
}

// Regularized lower incomplete gamma P(s, x): series for x < s+1,
// continued fraction otherwise (Lentz).  Plenty for chi-square p-values.
inline double reg_lower_gamma(double s, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefactor = s * std::log(x) - x - std::lgamma(s);
  if (x < s + 1.0) {
    double term = 1.0 / s;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
      term *= x / (s + k);
      sum += term;
      if (term < sum * 1e-15) break;
    }
    return std::exp(log_prefactor) * sum;
  }
  double b = x + 1.0 - s;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 1000; ++k) {
    const double an = -k * (k - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

inline double chi_square_cdf(double x, double dof) {
  return reg_lower_gamma(dof / 2.0, x / 2.0);
}

// Goodness-of-fit p-value of observed counts against expected probabilities.
inline double chi_square_gof_pvalue(const std::vector<long>& counts,
                                    const std::vector<double>& probs) {
  const long total = std::accumulate(counts.begin(), counts.end(), 0L);
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = probs[i] * total;
    const double diff = counts[i] - expected;
    stat += diff * diff / expected;
  }
  return 1.0 - chi_square_cdf(stat, static_cast<double>(counts.size() - 1));
}

}  // namespace support
