#pragma once

// Fundamental solution of L = L0 - d/dt on the homogeneous group:
//
//     gamma(x, t) = C_Q t^{-Q/2} exp(-|D_{1/sqrt t} x|_C^2 / 4),  t > 0,
//     Gamma(z0, z) = gamma(z^{-1} o z0),
//
// with |y|_C^2 = <C(1)^{-1} y, y> and C_Q = (4 pi)^{-N/2} det C(1)^{-1/2}.
// For fixed t, gamma(., t) is the N(0, 2 C(t)) density.

#include "kolmo/operator.hpp"
#include "kolmo/random.hpp"

namespace kolmo {

// One exact step of the diffusion generated by L0: y = mean_map * x + factor * g,
// g ~ N(0, I). covariance = factor * factor^T.
struct TransitionKernel {
  double dt = 0.0;
  Matrix mean_map;
  Matrix covariance;
  Matrix factor;
  // Per-coordinate standard deviation sqrt(covariance_ii).
  Vector spread;
};

class GammaContext {
 public:
  // Precomputes C(1)^{-1}, det C(1), C_Q and resolves the drift sign.
  // Throws NumericalError when C(1) is not positive definite.
  explicit GammaContext(OUOperator op);

  const OUOperator& op() const { return op_; }
  int dim() const { return op_.dim(); }
  int Q() const { return dims_.Q; }
  const HomogeneousDimensions& dimensions() const { return dims_; }
  double normalization() const { return cq_; }
  const Matrix& covariance_inverse() const { return cinv1_; }
  double covariance_det() const { return detc1_; }
  // +1 if the diffusion matching Gamma has drift +Bx, -1 for -Bx.
  int drift_sign() const { return drift_sign_; }

  double anisotropic_norm_sq(const Vector& y) const;

  double gamma(const Vector& x, double t) const;
  double log_gamma(const Vector& x, double t) const;
  double gamma_fundamental(const GroupPoint& z0, const GroupPoint& z) const;

  // |sum a_ij d_ij gamma + s <Bx, grad gamma> - d_t gamma| by central
  // differences of step h, where s = drift_sign. Points with
  // |D_{1/sqrt t} x|_C^2 < 1 or t < 10h are refused (DomainError), as is h <= 0.
  double pde_residual(const GroupPoint& z, double h) const;
  double pde_residual(const GroupPoint& z, double h, int drift_sign) const;

  // Exact transition of the diffusion with generator L0 over time dt.
  TransitionKernel transition_kernel(double dt) const;
  Vector transition_sample(const Vector& x, double dt, Rng& rng) const;
  static Vector transition_sample(const TransitionKernel& kernel, const Vector& x, Rng& rng);

  // Log density of the transition x -> y over dt, written through gamma:
  // gamma(x - E(dt) y, dt) when drift_sign = +1.
  double transition_log_density(const Vector& x, const Vector& y, double dt) const;

 private:
  OUOperator op_;
  HomogeneousDimensions dims_;
  Matrix cinv1_;
  double detc1_ = 0.0;
  double cq_ = 0.0;
  double log_cq_ = 0.0;
  int drift_sign_ = 1;
};

// Chooses the drift sign for which the finite-difference residual of gamma
// vanishes. The heat case (B = 0) is sign-symmetric and resolves to +1.
int resolve_drift_sign(const GammaContext& ctx);

}  // namespace kolmo
