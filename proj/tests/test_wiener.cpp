#include "kolmo/wiener.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace kolmo {
namespace {

Vector v2(double a, double b) { return Vector{{a, b}}; }

CriterionParams params(std::int64_t samples, std::uint64_t seed, int kmax = 10) {
  CriterionParams p;
  p.samples_per_k = samples;
  p.seed = seed;
  p.kmax = kmax;
  p.workers = 1;
  return p;
}

// Full-space d_k by midpoint quadrature over tau in (0, R_k]: the slice at
// tau is an ellipsoid of volume omega_N sqrt(det C(tau)) (2Q log(R/tau))^{N/2}.
double full_space_quadrature(const OUOperator& op, double radius) {
  const int n = op.dim(), q = op.homogeneous_dimension().Q;
  const double unit_ball = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1);
  constexpr int m = 400000;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double tau = radius * (i + 0.5) / m;
    const double det = op.covariance_C(tau).determinant();
    acc += unit_ball * std::sqrt(det) * std::pow(2.0 * q * std::log(radius / tau), n / 2.0);
  }
  return acc * radius / m;
}

TEST(Criterion, Alpha) {
  EXPECT_EQ(alpha(1), 0.0);
  EXPECT_NEAR(alpha(3), 3 * std::log(3.0), 1e-15);
  EXPECT_THROW(alpha(0), DomainError);
}

TEST(Criterion, FullSpaceClosedFormMatchesQuadrature) {
  for (const auto& op : {OUOperator::kolmogorov(), OUOperator::heat(2), OUOperator::heat(3)}) {
    const GammaContext ctx(op);
    for (int k : {1, 3, 5}) {
      const double r = radius_k(ctx, 0.5, k);
      const double closed = full_space_measure(ctx, 0.5, k);
      EXPECT_NEAR(closed / full_space_quadrature(op, r), 1.0, 1e-4) << k;
    }
  }
}

TEST(Criterion, EmptyDomainHitsEverything) {
  const GammaContext ctx(OUOperator::kolmogorov());
  for (int k : {1, 3, 5}) {
    const DkEstimate d = dk_estimate(ctx, empty_set(2), v2(0, 0), params(5000, 1), k);
    EXPECT_EQ(d.hits, d.samples);
    EXPECT_NEAR(d.value / full_space_measure(ctx, 0.5, k), 1.0, 1e-12);
  }
}

TEST(Criterion, WholeSpaceGivesZero) {
  for (const auto& op : {OUOperator::kolmogorov(), OUOperator::heat(3)}) {
    const GammaContext ctx(op);
    for (int k : {1, 3, 5}) {
      const DkEstimate d = dk_estimate(ctx, whole_space(op.dim()), Vector::Zero(op.dim()), params(5000, 2), k);
      EXPECT_EQ(d.value, 0.0);
      EXPECT_EQ(d.hits, 0);
    }
  }
}

TEST(Criterion, HalfspaceHalfMeasure) {
  // The region is symmetric under y -> -y and the complement of {x1 < 0}
  // pulls back to a half of it.
  for (const auto& op : {OUOperator::kolmogorov(), OUOperator::heat(2)}) {
    const GammaContext ctx(op);
    for (int k : {1, 3, 5}) {
      const DkEstimate d = dk_estimate(ctx, halfspace(v2(1, 0), 0.0), v2(0, 0), params(100000, 3), k);
      const double expect = 0.5 * full_space_measure(ctx, 0.5, k);
      EXPECT_LT(std::abs(d.value - expect), 3.0 * d.stderr_) << k;
      EXPECT_LE(d.ci_low, d.value);
      EXPECT_GE(d.ci_high, d.value);
    }
  }
}

TEST(Criterion, NestedDomainsMonotone) {
  // Same seed, same sample points: a larger domain can only lose hits.
  const GammaContext ctx(OUOperator::kolmogorov());
  const Domain small = ball(v2(0, 0), 1.0);
  const Domain large = set_union(small, box(v2(0.9, -0.5), v2(2, 0.5)));
  for (int k = 1; k <= 6; ++k) {
    const DkEstimate a = dk_estimate(ctx, small, v2(1, 0), params(20000, 4), k);
    const DkEstimate b = dk_estimate(ctx, large, v2(1, 0), params(20000, 4), k);
    EXPECT_GE(a.hits, b.hits) << k;
  }
}

TEST(Criterion, SeriesVerdictRules) {
  auto rows = [](std::vector<double> terms, double se) {
    std::vector<CriterionRow> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      CriterionRow r;
      r.k = static_cast<int>(i) + 1;
      r.term = terms[i];
      r.term_stderr = se * terms[i];
      out.push_back(r);
    }
    return out;
  };
  EXPECT_EQ(series_verdict(rows({1, 0.5, 0, 0, 0, 0}, 0)), SeriesVerdict::ConvergesLikely);
  EXPECT_EQ(series_verdict(rows({0.2, 0.2, 0.2, 0.2, 0.2, 0.2}, 0.01)), SeriesVerdict::DivergesLikely);
  EXPECT_EQ(series_verdict(rows({1, 0.1, 0.01, 1e-3, 1e-4, 1e-5}, 0.01)), SeriesVerdict::ConvergesLikely);
  EXPECT_EQ(series_verdict(rows({1, 0.8, 0.6, 0.45, 0.35, 0.25}, 0.01)), SeriesVerdict::Inconclusive);
  EXPECT_EQ(series_verdict(rows({1}, 0.01)), SeriesVerdict::Inconclusive);
}

TEST(Criterion, BallBoundaryDivergesPuncturedCenterConverges) {
  const GammaContext ctx(OUOperator::heat(2));
  const auto reg = evaluate_criterion(ctx, ball(v2(0, 0), 1.0), v2(1, 0), params(20000, 5));
  EXPECT_EQ(reg.verdict, SeriesVerdict::DivergesLikely) << reg.rationale;
  const auto irr = evaluate_criterion(ctx, puncture(ball(v2(0, 0), 1.0), v2(0, 0), 0.0), v2(0, 0),
                                      params(20000, 6));
  EXPECT_EQ(irr.verdict, SeriesVerdict::ConvergesLikely) << irr.rationale;
  ASSERT_EQ(reg.rows.size(), 10u);
  EXPECT_NEAR(reg.nu, std::pow(0.5, 4.0 / 2.0), 1e-15);
  for (std::size_t i = 1; i < reg.rows.size(); ++i) EXPECT_GE(reg.rows[i].partial_sum, reg.rows[i - 1].partial_sum);
}

TEST(Criterion, UpperBoundHolds) {
  const GammaContext ctx(OUOperator::kolmogorov());
  const auto chk = dk_upper_bound_check(ctx, box(v2(-1, -1), v2(1, 1)), v2(1, 0.2), params(20000, 7));
  EXPECT_TRUE(chk.bound_holds);
  EXPECT_TRUE(chk.tail_decreasing);
  EXPECT_NEAR(chk.constant, full_space_measure(ctx, 0.5, 1), 1e-15);
}

TEST(Criterion, WorkerCountInvariance) {
  const GammaContext ctx(OUOperator::kolmogorov());
  CriterionParams a = params(30000, 8), b = a;
  b.workers = 3;
  const Domain omega = box(v2(-1, -1), v2(1, 1));
  for (int k : {2, 4}) {
    const DkEstimate da = dk_estimate(ctx, omega, v2(1, 0.2), a, k);
    const DkEstimate db = dk_estimate(ctx, omega, v2(1, 0.2), b, k);
    EXPECT_EQ(da.hits, db.hits);
    EXPECT_EQ(da.value, db.value);
  }
}

TEST(Criterion, RejectsBadInput) {
  const GammaContext ctx(OUOperator::kolmogorov());
  EXPECT_THROW(dk_estimate(ctx, whole_space(2), v2(0, 0), params(0, 1), 1), DomainError);
  EXPECT_THROW(dk_estimate(ctx, whole_space(2), Vector::Zero(3), params(10, 1), 1), DomainError);
}

}  // namespace
}  // namespace kolmo
