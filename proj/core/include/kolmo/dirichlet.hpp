#pragma once

// Monte Carlo Perron-Wiener solutions of
//
//     L0 u = 0 in Omega,        u = phi on the boundary,
//     (L0 - d/dt) v = 0 in O,   v = psi on the parabolic boundary of O,
//
// as expectations of the boundary data at the first exit of the diffusion
// generated by L0. Paths move with the exact Gaussian transition; the step
// shrinks geometrically near the boundary and exits are localized by
// bisection along the last segment.

#include "kolmo/domain.hpp"
#include "kolmo/fundamental_solution.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kolmo {

using BoundaryFunction = std::function<double(const Vector&)>;
using SpaceTimeFunction = std::function<double(const Vector&, double)>;

struct SolverConfig {
  double dt_base = 1e-3;
  double dt_min = 1e-8;
  std::int64_t max_steps = 1000000;
  std::int64_t paths = 10000;
  std::uint64_t seed = 0;
  double shrink_factor = 0.5;
  int workers = 0;

  // Throws DomainError when the invariants do not hold.
  void check() const;
};

struct DirichletEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t paths_used = 0;
  std::int64_t truncated_paths = 0;
  double mean_exit_time = 0.0;
  // False when more than 0.1% of the paths hit max_steps.
  bool valid = true;
};

enum class RegularityClass { RegularLikely, IrregularLikely, Inconclusive };
const char* to_string(RegularityClass v);

struct ProbeConfig {
  double rho0 = 0.5;
  int levels = 8;
  double regular_threshold = 0.1;
  double irregular_threshold = 0.3;
  // Width multiplier of the clearance interval around the final estimate.
  double z = 1.959963984540054;
  // Boundary-detection tolerance; <= 0 selects the domain default.
  double eps = 0.0;
  // Random approach directions tried besides the 2N coordinate ones.
  int random_directions = 32;
  // Measure distances to x0 with the block quasi-norm sum |u_b|^(1/(2b+1))
  // and place approach points at x0 + D_r(v). Off: Euclidean, x0 + r v.
  bool homogeneous = true;
};

struct ProbeRow {
  double distance = 0.0;
  Vector x;
  double t = 0.0;
  DirichletEstimate estimate;
};

struct RegularityVerdict {
  Vector x0;
  double t0 = 0.0;
  bool evolution = false;
  RegularityClass verdict = RegularityClass::Inconclusive;
  Vector direction;
  std::vector<ProbeRow> rows;
};

DirichletEstimate solve_stationary(const GammaContext& ctx, const Domain& omega, const BoundaryFunction& phi,
                                   const Vector& x, const SolverConfig& cfg);

// Paths start at z = (x, t) and run with the clock decreasing; they are
// absorbed on the lateral boundary or at the bottom slice t = c.t0.
DirichletEstimate solve_evolution(const GammaContext& ctx, const Cylinder& c, const SpaceTimeFunction& psi,
                                  const GroupPoint& z, const SolverConfig& cfg);

// Probes u(x_j) with phi(x) = min(1, ||x - x0|| / rho0) at interior points
// x_j = x0 + D_{r_j} v, r_j = rho0 2^{-j}, j = 1..levels (see
// ProbeConfig::homogeneous for the norm).
RegularityVerdict regularity_probe_stationary(const GammaContext& ctx, const Domain& omega, const Vector& x0,
                                              const SolverConfig& cfg, const ProbeConfig& probe = {});

// Same scheme on the cylinder at time t0 with the parabolic distance
// ||x - x0|| + |t - t0|^{1/2}.
RegularityVerdict regularity_probe_evolution(const GammaContext& ctx, const Cylinder& c, const GroupPoint& z0,
                                             const SolverConfig& cfg, const ProbeConfig& probe = {});

// Interior approach direction at a boundary point: among coordinate and
// seeded random unit vectors, those whose probe points all lie inside,
// ranked by the length of the inside chord. Throws DomainError if none.
Vector interior_direction(const Domain& omega, const Vector& x0, const ProbeConfig& probe, std::uint64_t seed,
                          const Eigen::VectorXi& exponents = {});

RegularityClass classify_probe(const std::vector<ProbeRow>& rows, const ProbeConfig& probe);

struct MonotoneReport {
  Vector x;
  std::vector<double> times;
  std::vector<DirichletEstimate> estimates;
  // Indices i with estimate[i+1] - estimate[i] > z * combined standard error.
  std::vector<int> violations;
  double z = 3.0;
  bool passed() const { return violations.empty(); }
};

// Estimates t -> K(x, t) on an increasing grid and flags increases beyond
// z combined standard errors. Without data, uses exp(-(t - t0)) on the
// lateral boundary and 1 at the bottom. Without x, uses the base box center.
MonotoneReport monotone_solution_test(const GammaContext& ctx, const Cylinder& c, const SolverConfig& cfg,
                                      const SpaceTimeFunction& data = {}, const Vector& x = {},
                                      int grid_points = 10, double z = 3.0);

}  // namespace kolmo
