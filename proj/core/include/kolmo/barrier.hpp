#pragma once

// Explicit strict L0-subsolution vanishing at one point,
//
//     h(x) = E(lambda (x - x0)_1) + sum_{j >= 2} (x - x0)_j^2,
//     E(s) = exp(sqrt(1 + s^2)) - e,
//
// with lambda large enough that L0 h > 0 on a bounded working set, plus the
// space-time data built from it: the t-independent lift and the monotone
// profile equal to sup h up to time delta and to h afterwards.

#include "kolmo/dirichlet.hpp"
#include "kolmo/domain.hpp"
#include "kolmo/operator.hpp"

#include <cstdint>
#include <optional>

namespace kolmo {

struct BarrierH {
  Vector x0;
  double lambda = 1.0;
  double alpha_coef = 0.0;  // inf of a_11 over Y
  double beta_coef = 0.0;   // sup of sum_j |(Bx)_j| over Y
  Domain working_set;
};

// Scalar profile E and its first two derivatives.
double barrier_profile(double s);
double barrier_profile_d1(double s);
double barrier_profile_d2(double s);

// Twice the threshold 6 sqrt(2) beta / alpha past which
// lambda^2 (alpha / (2 sqrt 2) - beta / lambda) - 2 beta lambda > 0;
// 1 when beta = 0. Throws DomainError for alpha <= 0.
double select_lambda(double alpha_coef, double beta_coef);

// sup over the working set's bounding box of sum_j |(Bx)_j|, by vertex
// enumeration (the function is convex and piecewise linear).
double drift_bound(const OUOperator& op, const Domain& working_set);

// Builds the barrier for op on a bounded working set; lambda defaults to
// select_lambda(alpha, beta).
BarrierH make_barrier(const OUOperator& op, const Domain& working_set, const Vector& x0,
                      std::optional<double> lambda = std::nullopt);

double eval_h(const BarrierH& b, const Vector& x);
Vector grad_h(const BarrierH& b, const Vector& x);
Matrix hessian_h(const BarrierH& b, const Vector& x);
// sum a_ij d_ij h + <Bx, grad h>, from the closed-form derivatives.
double apply_operator(const BarrierH& b, const OUOperator& op, const Vector& x);

struct GridConfig {
  int per_axis = 64;
  std::int64_t random_samples = 10000;
  std::uint64_t seed = 0;
};

struct SuperharmonicityReport {
  double min_value = 0.0;
  Vector argmin;
  std::int64_t samples = 0;
  std::int64_t nonpositive = 0;
  double lambda = 0.0;
  double alpha_coef = 0.0;
  double beta_coef = 0.0;
  GridConfig grid;
  bool passed() const { return samples > 0 && nonpositive == 0; }
};

// Evaluates L0 h on a tensor grid over the working set's bounding box
// (restricted to the set) and on uniform random samples inside it.
SuperharmonicityReport verify_strict_superharmonicity(const BarrierH& b, const OUOperator& op,
                                                      const GridConfig& grid = {});

// (x, t) -> b0(x).
SpaceTimeFunction lift_to_cylinder(BoundaryFunction b0);

// h for t > t0 + delta, sup h for t <= t0 + delta. sup h is taken over the
// vertices of the base's bounding box, where the convex h attains its
// maximum. Throws DomainError unless 0 < delta < t1 - t0.
SpaceTimeFunction monotone_hat_data(const BarrierH& b, const Cylinder& c, double delta);
double barrier_sup(const BarrierH& b, const Domain& base);

}  // namespace kolmo
