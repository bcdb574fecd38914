#include "kolmo/barrier.hpp"

#include "kolmo/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace kolmo {

namespace {

template <typename F>
void for_each_vertex(const Vector& lo, const Vector& hi, F&& f) {
  const int n = static_cast<int>(lo.size());
  if (n > 24) throw StructuralError("vertex enumeration limited to N <= 24");
  Vector v(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? hi[i] : lo[i];
    f(v);
  }
}

}  // namespace

double barrier_profile(double s) { return std::exp(std::sqrt(1.0 + s * s)) - std::numbers::e; }

double barrier_profile_d1(double s) {
  const double phi = std::sqrt(1.0 + s * s);
  return std::exp(phi) * s / phi;
}

double barrier_profile_d2(double s) {
  const double q = 1.0 + s * s;
  const double phi = std::sqrt(q);
  return std::exp(phi) * (s * s / q + 1.0 / (q * phi));
}

double select_lambda(double alpha_coef, double beta_coef) {
  if (!(alpha_coef > 0.0)) throw DomainError("alpha must be positive");
  if (beta_coef < 0.0) throw DomainError("beta must be nonnegative");
  if (beta_coef == 0.0) return 1.0;
  return 2.0 * (6.0 * std::numbers::sqrt2 * beta_coef / alpha_coef);
}

double drift_bound(const OUOperator& op, const Domain& working_set) {
  if (!working_set.bounded()) throw DomainError("working set must be bounded");
  double best = 0.0;
  for_each_vertex(working_set.lower(), working_set.upper(),
                  [&](const Vector& v) { best = std::max(best, (op.drift() * v).lpNorm<1>()); });
  return best;
}

BarrierH make_barrier(const OUOperator& op, const Domain& working_set, const Vector& x0,
                      std::optional<double> lambda) {
  if (x0.size() != op.dim() || working_set.dim() != op.dim()) throw DomainError("dimension mismatch");
  BarrierH b{x0, 1.0, op.diffusion()(0, 0), drift_bound(op, working_set), working_set};
  b.lambda = lambda ? *lambda : select_lambda(b.alpha_coef, b.beta_coef);
  if (!(b.lambda > 0.0)) throw DomainError("lambda must be positive");
  return b;
}

double eval_h(const BarrierH& b, const Vector& x) {
  const Vector u = x - b.x0;
  return barrier_profile(b.lambda * u[0]) + u.tail(u.size() - 1).squaredNorm();
}

Vector grad_h(const BarrierH& b, const Vector& x) {
  Vector g = 2.0 * (x - b.x0);
  g[0] = b.lambda * barrier_profile_d1(b.lambda * (x[0] - b.x0[0]));
  return g;
}

Matrix hessian_h(const BarrierH& b, const Vector& x) {
  Matrix h = 2.0 * Matrix::Identity(x.size(), x.size());
  h(0, 0) = b.lambda * b.lambda * barrier_profile_d2(b.lambda * (x[0] - b.x0[0]));
  return h;
}

double apply_operator(const BarrierH& b, const OUOperator& op, const Vector& x) {
  const Matrix& a = op.diffusion();
  double acc = 0.0;
  // The Hessian of h is diagonal.
  const double lam = b.lambda;
  acc += a(0, 0) * lam * lam * barrier_profile_d2(lam * (x[0] - b.x0[0]));
  for (Eigen::Index j = 1; j < x.size(); ++j) acc += 2.0 * a(j, j);
  return acc + (op.drift() * x).dot(grad_h(b, x));
}

SuperharmonicityReport verify_strict_superharmonicity(const BarrierH& b, const OUOperator& op,
                                                      const GridConfig& grid) {
  const Domain& y = b.working_set;
  if (!y.bounded()) throw DomainError("working set must be bounded");
  SuperharmonicityReport rep;
  rep.lambda = b.lambda;
  rep.alpha_coef = b.alpha_coef;
  rep.beta_coef = b.beta_coef;
  rep.grid = grid;
  rep.min_value = std::numeric_limits<double>::infinity();
  auto visit = [&](const Vector& x) {
    if (!y.contains(x)) return;
    const double v = apply_operator(b, op, x);
    ++rep.samples;
    if (v <= 0.0) ++rep.nonpositive;
    if (v < rep.min_value) rep.min_value = v, rep.argmin = x;
  };

  const int n = y.dim();
  const Vector lo = y.lower(), hi = y.upper();
  const int m = std::max(grid.per_axis, 2);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vector x(n);
  for (;;) {
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * idx[static_cast<std::size_t>(i)] / (m - 1);
    visit(x);
    int i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] == m) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }

  Rng rng = make_stream(grid.seed, 0x62617272ULL);
  std::uniform_real_distribution<double> unif;
  std::int64_t accepted = 0;
  for (std::int64_t attempt = 0; accepted < grid.random_samples && attempt < 100 * grid.random_samples; ++attempt) {
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unif(rng);
    if (!y.contains(x)) continue;
    ++accepted;
    visit(x);
  }
  return rep;
}

SpaceTimeFunction lift_to_cylinder(BoundaryFunction b0) {
  return [b0 = std::move(b0)](const Vector& x, double) { return b0(x); };
}

double barrier_sup(const BarrierH& b, const Domain& base) {
  if (!base.bounded()) throw DomainError("sup of h needs a bounded base");
  double best = 0.0;
  for_each_vertex(base.lower(), base.upper(), [&](const Vector& v) { best = std::max(best, eval_h(b, v)); });
  return best;
}

SpaceTimeFunction monotone_hat_data(const BarrierH& b, const Cylinder& c, double delta) {
  if (!(delta > 0.0 && delta < c.duration())) throw DomainError("delta must lie in (0, T)");
  const double top = barrier_sup(b, c.base);
  const double cut = c.t0 + delta;
  return [b, top, cut](const Vector& x, double t) { return t <= cut ? top : eval_h(b, x); };
}

}  // namespace kolmo
