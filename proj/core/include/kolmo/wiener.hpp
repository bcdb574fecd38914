#pragma once

// Wiener-Landis type series criterion for L0-regularity of a boundary point.
//
// With alpha(k) = k log k, R_k = (C_Q mu^alpha(k))^{2/Q} and nu = mu^{(Q+2)/Q},
//
//   d_k = |{(y, tau) : tau > 0, y in x0 - E(tau)(complement of Omega),
//                      |D_{1/sqrt tau} y|_C^2 < 2Q log(R_k / tau)}|
//
// and x0 is regular whenever sum_k d_k / nu^alpha(k) diverges. d_k is
// estimated by Monte Carlo over the enclosing region, whose measure is known
// in closed form.

#include "kolmo/domain.hpp"
#include "kolmo/fundamental_solution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kolmo {

struct CriterionParams {
  double mu = 0.5;
  int kmax = 20;
  std::int64_t samples_per_k = 100000;
  std::uint64_t seed = 0;
  int workers = 0;
};

enum class SeriesVerdict { DivergesLikely, ConvergesLikely, Inconclusive };
const char* to_string(SeriesVerdict v);

struct DkEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t hits = 0;
  std::int64_t samples = 0;
  // Measure of the enclosing region (d_k for an empty Omega).
  double enclosing = 0.0;
};

struct CriterionRow {
  int k = 0;
  double alpha = 0.0;
  double radius = 0.0;  // R_k
  DkEstimate dk;
  double term = 0.0;  // d_k / nu^alpha(k)
  double term_stderr = 0.0;
  double partial_sum = 0.0;
};

struct CriterionReport {
  CriterionParams params;
  int Q = 0;
  double nu = 0.0;
  Vector x0;
  std::vector<CriterionRow> rows;
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
  std::string rationale;
};

double alpha(int k);
double radius_k(const GammaContext& ctx, double mu, int k);
// 2Q log(R_k / tau); negative when tau > R_k.
double superlevel_radius_sq(int Q, double radius, double tau);

// Closed-form measure of the region for an empty Omega:
//   omega_N sqrt(det C(1)) (2Q)^{N/2} Gamma(N/2 + 1) / ((Q+2)/2)^{N/2+1} R_k^{(Q+2)/2}.
double full_space_measure(const GammaContext& ctx, double mu, int k);
// C_Q^* in d_k <= C_Q^* nu^alpha(k).
double upper_bound_constant(const GammaContext& ctx, double mu);

// Throws DomainError when samples_per_k < 1 or x0 has the wrong size.
DkEstimate dk_estimate(const GammaContext& ctx, const Domain& omega, const Vector& x0,
                       const CriterionParams& params, int k);

// Verdict heuristic over the last half of the computed terms: diverges-likely
// when the terms are not decaying in log scale (fitted slope >= -slope_tol)
// and their mean exceeds 10 standard errors; converges-likely when all terms
// vanish or successive ratios stay below 0.5; inconclusive otherwise.
SeriesVerdict series_verdict(const std::vector<CriterionRow>& rows, std::string* rationale = nullptr);

CriterionReport evaluate_criterion(const GammaContext& ctx, const Domain& omega, const Vector& x0,
                                   const CriterionParams& params);

struct UpperBoundCheck {
  double constant = 0.0;  // C_Q^*
  std::vector<double> bound;
  std::vector<double> tail_ratio;  // d_{k+1} / nu^alpha(k), k = 1..kmax-1
  bool bound_holds = true;
  bool tail_decreasing = true;
  int first_tail_k = 5;
};

UpperBoundCheck dk_upper_bound_check(const GammaContext& ctx, const CriterionReport& report);
UpperBoundCheck dk_upper_bound_check(const GammaContext& ctx, const Domain& omega, const Vector& x0,
                                     const CriterionParams& params);

}  // namespace kolmo
