#include "kolmo/fundamental_solution.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace kolmo {

namespace {

constexpr double kClipTol = 1e-12;

// Symmetric square root of a positive semidefinite matrix, tolerating
// eigenvalues down to -kClipTol * largest.
Matrix symmetric_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  Vector ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -kClipTol * std::max(top, 1.0)) {
      throw NumericalError("transition covariance is not positive semidefinite");
    }
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

GammaContext::GammaContext(OUOperator op) : op_(std::move(op)) {
  dims_ = op_.homogeneous_dimension();
  const Matrix c1 = op_.covariance_C(1.0);
  Eigen::LLT<Matrix> llt(c1);
  if (llt.info() != Eigen::Success) throw NumericalError("C(1) is not positive definite");
  cinv1_ = llt.solve(Matrix::Identity(dim(), dim()));
  cinv1_ = 0.5 * (cinv1_ + cinv1_.transpose());
  const Matrix l = llt.matrixL();
  double logdet = 0.0;
  for (int i = 0; i < dim(); ++i) logdet += 2.0 * std::log(l(i, i));
  detc1_ = std::exp(logdet);
  log_cq_ = -0.5 * dim() * std::log(4.0 * std::numbers::pi) - 0.5 * logdet;
  cq_ = std::exp(log_cq_);
  drift_sign_ = resolve_drift_sign(*this);
}

double GammaContext::anisotropic_norm_sq(const Vector& y) const { return y.dot(cinv1_ * y); }

double GammaContext::log_gamma(const Vector& x, double t) const {
  if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
  const Vector scaled = op_.dilate_space(1.0 / std::sqrt(t), x);
  return log_cq_ - 0.5 * Q() * std::log(t) - 0.25 * anisotropic_norm_sq(scaled);
}

double GammaContext::gamma(const Vector& x, double t) const {
  if (!(t > 0.0)) return 0.0;
  return std::exp(log_gamma(x, t));
}

double GammaContext::gamma_fundamental(const GroupPoint& z0, const GroupPoint& z) const {
  const GroupPoint d = op_.compose(op_.invert(z), z0);
  return gamma(d.x, d.t);
}

double GammaContext::pde_residual(const GroupPoint& z, double h) const {
  return pde_residual(z, h, drift_sign_);
}

double GammaContext::pde_residual(const GroupPoint& z, double h, int sign) const {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  if (z.t < 10.0 * h) throw DomainError("point too close to t = 0 for step h");
  if (anisotropic_norm_sq(op_.dilate_space(1.0 / std::sqrt(z.t), z.x)) < 1.0) {
    throw DomainError("point too close to the pole of gamma");
  }
  const int n = dim();
  const Matrix& a = op_.diffusion();
  auto g = [&](const Vector& x, double t) { return gamma(x, t); };

  const double g0 = g(z.x, z.t);
  double second = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (a(i, j) == 0.0) continue;
      double dij;
      if (i == j) {
        Vector xp = z.x, xm = z.x;
        xp[i] += h;
        xm[i] -= h;
        dij = (g(xp, z.t) - 2.0 * g0 + g(xm, z.t)) / (h * h);
      } else {
        Vector pp = z.x, pm = z.x, mp = z.x, mm = z.x;
        pp[i] += h, pp[j] += h;
        pm[i] += h, pm[j] -= h;
        mp[i] -= h, mp[j] += h;
        mm[i] -= h, mm[j] -= h;
        dij = (g(pp, z.t) - g(pm, z.t) - g(mp, z.t) + g(mm, z.t)) / (4.0 * h * h);
      }
      second += (i == j ? 1.0 : 2.0) * a(i, j) * dij;
    }
  }
  const Vector bx = op_.drift() * z.x;
  double first = 0.0;
  for (int i = 0; i < n; ++i) {
    if (bx[i] == 0.0) continue;
    Vector xp = z.x, xm = z.x;
    xp[i] += h;
    xm[i] -= h;
    first += bx[i] * (g(xp, z.t) - g(xm, z.t)) / (2.0 * h);
  }
  const double dt = (g(z.x, z.t + h) - g(z.x, z.t - h)) / (2.0 * h);
  return std::abs(second + sign * first - dt);
}

TransitionKernel GammaContext::transition_kernel(double dt) const {
  if (!(dt > 0.0)) throw DomainError("transition step must be positive");
  TransitionKernel k;
  k.dt = dt;
  k.mean_map = op_.exp_minus_sB(-drift_sign_ * dt);
  k.covariance = 2.0 * op_.gramian(dt, drift_sign_);
  // Factor in dilation-normalized coordinates, where the matrix is O(1)
  // regardless of dt, then scale back.
  const Vector up = op_.dilation_weights(std::sqrt(dt));
  const Vector down = up.cwiseInverse();
  const Matrix normalized = down.asDiagonal() * k.covariance * down.asDiagonal();
  k.factor = up.asDiagonal() * symmetric_sqrt(normalized);
  k.spread = k.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  return k;
}

Vector GammaContext::transition_sample(const TransitionKernel& kernel, const Vector& x, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector g(x.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = normal(rng);
  return kernel.mean_map * x + kernel.factor * g;
}

Vector GammaContext::transition_sample(const Vector& x, double dt, Rng& rng) const {
  return transition_sample(transition_kernel(dt), x, rng);
}

double GammaContext::transition_log_density(const Vector& x, const Vector& y, double dt) const {
  if (drift_sign_ > 0) return log_gamma(x - op_.exp_minus_sB(dt) * y, dt);
  return log_gamma(y - op_.exp_minus_sB(dt) * x, dt);
}

int resolve_drift_sign(const GammaContext& ctx) {
  const int n = ctx.dim();
  constexpr double h = 1e-3;
  double plus = 0.0;
  double minus = 0.0;
  for (int probe = 0; probe < 4; ++probe) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = ((i + probe) % 2 == 0 ? 1.0 : -0.5) + 0.25 * probe;
    v *= std::sqrt(4.0 / ctx.anisotropic_norm_sq(v));
    const double t = 0.5 + 0.5 * probe;
    const GroupPoint z{ctx.op().dilate_space(std::sqrt(t), v), t};
    const double scale = ctx.gamma(z.x, z.t);
    plus += ctx.pde_residual(z, h, +1) / scale;
    minus += ctx.pde_residual(z, h, -1) / scale;
  }
  return minus < 0.5 * plus ? -1 : +1;
}

}  // namespace kolmo
