#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cdlab/family.hpp"
#include "cdlab/param_domain.hpp"
#include "cdlab/rng.hpp"

namespace cdlab {

struct UnsupportedKernelOp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact one-step matrix of a kernel over an enumerated state space.  State i
// is the bit pattern i, bit k holding component k of x (visible bits low,
// hidden bits high for the RBM).
struct TransitionMatrix {
  Matrix P;   // row-stochastic: P(i, j) = probability of i -> j
  Vector pi;  // exact stationary law p_theta over the same ordering
};

// Per-theta sampler with all theta-dependent tables precomputed, so repeated
// stepping inside CD loops costs no setup.
class Stepper {
 public:
  virtual ~Stepper() = default;
  virtual void step(Vector& x, Rng& rng) const = 0;
};

class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual const std::string& name() const = 0;
  virtual std::unique_ptr<Stepper> make_stepper(const Vector& theta) const = 0;

  void kernel_step(const Vector& theta, Vector& x, Rng& rng) const;
  // m sequential transitions, m >= 1.
  void m_step(const Vector& theta, Vector& x, int m, Rng& rng) const;

  virtual bool has_transition_matrix() const { return false; }
  virtual TransitionMatrix transition_matrix(const Vector& theta) const;

  // E[phi(X_m) | X_0 = x] where a closed form exists (Gaussian Gibbs affine
  // recursion; exact resampling gives the model mean).
  virtual bool has_exact_conditional_mean() const { return false; }
  virtual Vector exact_conditional_mean(const Vector& theta, const Vector& x,
                                        int m) const;
};

// Systematic-scan Gibbs for the fully observed RBM: all hidden units from
// their logistic conditionals given v, then all visible units given h.
class RbmGibbsKernel final : public Kernel {
 public:
  RbmGibbsKernel(int nv, int nh);

  const std::string& name() const override;
  std::unique_ptr<Stepper> make_stepper(const Vector& theta) const override;
  bool has_transition_matrix() const override { return true; }
  TransitionMatrix transition_matrix(const Vector& theta) const override;

  // Conditional probability tables for one theta; the packed-state step is
  // the hot path used by run_cd and draws uniforms in exactly the same order
  // as the generic stepper.
  struct Tables {
    int nv;
    int nh;
    std::vector<double> p_hidden;   // [v * nh + i] = P(h_i = 1 | v)
    std::vector<double> p_visible;  // [h * nv + j] = P(v_j = 1 | h)
  };
  Tables tables(const Vector& theta) const;
  static std::uint32_t step_packed(const Tables& t, std::uint32_t state,
                                   Rng& rng);

  int nv() const { return nv_; }
  int nh() const { return nh_; }

 private:
  int nv_;
  int nh_;
};

// Systematic-scan Gibbs on the p-variate normal N(Sigma0 theta, Sigma0),
// coordinates updated in index order from their exact conditionals.
class GaussianGibbsKernel final : public Kernel {
 public:
  explicit GaussianGibbsKernel(const Matrix& sigma0);

  const std::string& name() const override;
  std::unique_ptr<Stepper> make_stepper(const Vector& theta) const override;
  bool has_exact_conditional_mean() const override { return true; }
  Vector exact_conditional_mean(const Vector& theta, const Vector& x,
                                int m) const override;

  // One-sweep affine contraction: E[X' - mu | X = x] = A (x - mu).
  const Matrix& sweep_matrix() const { return sweep_; }

 private:
  Matrix sigma0_;
  Vector cond_sd_;    // per-coordinate conditional standard deviation
  Matrix cond_coef_;  // row j: regression coefficients on the other coords
  Matrix sweep_;
};

// Idealized alpha = 0 comparator: every step discards x and draws fresh from
// p_theta.  The family must outlive the kernel.
class ExactResampleKernel final : public Kernel {
 public:
  explicit ExactResampleKernel(const Family& family);

  const std::string& name() const override;
  std::unique_ptr<Stepper> make_stepper(const Vector& theta) const override;
  bool has_transition_matrix() const override;
  TransitionMatrix transition_matrix(const Vector& theta) const override;
  bool has_exact_conditional_mean() const override { return true; }
  Vector exact_conditional_mean(const Vector& theta, const Vector& x,
                                int m) const override;

 private:
  const Family* family_;
};

}  // namespace cdlab
