#include "kolmo/operator.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace kolmo {
namespace {

using testing::rel_err;

TEST(Operator, KolmogorovAssembly) {
  const OUOperator op = OUOperator::kolmogorov();
  Matrix b(2, 2);
  b << 0, 0, 1, 0;
  EXPECT_EQ(op.drift(), b);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1;
  EXPECT_EQ(op.diffusion(), a);
}

TEST(Operator, BlockTransposePlacement) {
  const OUOperator op = testing::p21();
  // B_1 is 2 x 1; its transpose fills row 2, columns 0..1.
  EXPECT_DOUBLE_EQ(op.drift()(2, 0), 1.0);
  EXPECT_DOUBLE_EQ(op.drift()(2, 1), 0.5);
  EXPECT_DOUBLE_EQ(op.drift().topRows(2).cwiseAbs().sum(), 0.0);
}

TEST(Operator, ShapeMismatchThrows) {
  EXPECT_THROW(OUOperator(BlockSignature{{1, 1}}, Matrix::Identity(2, 2), {Matrix::Ones(1, 1)}), StructuralError);
  EXPECT_THROW(OUOperator(BlockSignature{{2, 1}}, Matrix::Identity(2, 2), {Matrix::Ones(1, 1)}), StructuralError);
  EXPECT_THROW(OUOperator(BlockSignature{{1, 1}}, Matrix::Identity(1, 1), {}), StructuralError);
}

TEST(Operator, ValidateFlagsBadInputs) {
  EXPECT_TRUE(validate(OUOperator::kolmogorov()).valid());
  EXPECT_TRUE(validate(OUOperator::heat(3)).valid());
  EXPECT_TRUE(validate(testing::p21()).valid());

  auto failed = [](const ValidationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
      if (c.name == name) return !c.passed;
    return false;
  };
  // Rank-deficient drift block.
  const OUOperator rank0(BlockSignature{{1, 1}}, Matrix::Identity(1, 1), {Matrix::Zero(1, 1)});
  EXPECT_FALSE(validate(rank0).valid());
  EXPECT_TRUE(failed(validate(rank0), "b1_full_column_rank"));
  // Indefinite diffusion.
  Matrix a0(2, 2);
  a0 << 1, 0, 0, -1;
  EXPECT_TRUE(failed(validate(OUOperator(BlockSignature{{2}}, a0, {})), "a0_positive_definite"));
  // Non-symmetric diffusion.
  a0 << 1, 0.3, 0, 1;
  EXPECT_TRUE(failed(validate(OUOperator(BlockSignature{{2}}, a0, {})), "a0_symmetric"));
  // Increasing block sizes.
  const OUOperator inc(BlockSignature{{1, 2}}, Matrix::Identity(1, 1), {Matrix::Ones(1, 2)});
  EXPECT_TRUE(failed(validate(inc), "block_order"));
}

TEST(Operator, KolmogorovCovarianceClosedForm) {
  const OUOperator op = OUOperator::kolmogorov();
  for (double t : {1e-4, 0.1, 0.5, 1.0, 2.0, 7.5, 100.0}) {
    Matrix expect(2, 2);
    expect << t, -t * t / 2, -t * t / 2, t * t * t / 3;
    const Matrix c = op.covariance_C(t);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(c(i, j), expect(i, j), 1e-12 * std::abs(expect(i, j))) << t;
  }
  Matrix inv(2, 2);
  inv << 4, 6, 6, 12;
  EXPECT_LT(rel_err(op.covariance_C(1.0).inverse(), inv), 1e-12);
  EXPECT_NEAR(op.covariance_C(1.0).determinant(), 1.0 / 12.0, 1e-14);
  EXPECT_THROW(op.covariance_C(0.0), DomainError);
}

TEST(Operator, ForwardGramianClosedForm) {
  // exp(uB) A exp(uB)^T = [[1, u], [u, u^2]] for the Kolmogorov drift.
  const OUOperator op = OUOperator::kolmogorov();
  const double t = 0.7;
  Matrix expect(2, 2);
  expect << t, t * t / 2, t * t / 2, t * t * t / 3;
  EXPECT_LT(rel_err(op.gramian(t, +1), expect), 1e-14);
}

TEST(Operator, ExpMinusSB) {
  const OUOperator op = OUOperator::kolmogorov();
  const Vector e1 = Vector::Unit(2, 0);
  const Vector v = op.exp_minus_sB(1.0) * e1;
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], -1.0);
  Rng rng(5);
  const OUOperator q = testing::random_operator(rng, {2, 2, 1});
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const double s = u(rng), r = u(rng);
    EXPECT_LT(rel_err(q.exp_minus_sB(s) * q.exp_minus_sB(r), q.exp_minus_sB(s + r)), 1e-10);
  }
  EXPECT_LT(rel_err(q.exp_minus_sB(0.0), Matrix::Identity(5, 5)), 1e-15);
  // Independent oracle: a truncated Taylor series of exp(-sB) to high order.
  Matrix taylor = Matrix::Identity(5, 5), term = Matrix::Identity(5, 5);
  for (int m = 1; m < 30; ++m) {
    term = term * (-1.3 * q.drift()) / m;
    taylor += term;
  }
  EXPECT_LT(rel_err(q.exp_minus_sB(1.3), taylor), 1e-12);
}

TEST(Operator, HomogeneousDimension) {
  EXPECT_EQ(OUOperator::kolmogorov().homogeneous_dimension().Q, 4);
  EXPECT_EQ(OUOperator::kolmogorov().homogeneous_dimension().q, 6);
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(OUOperator::heat(n).homogeneous_dimension().Q, n);
  EXPECT_EQ(testing::p21().homogeneous_dimension().Q, 5);
  Rng rng(1);
  EXPECT_EQ(testing::random_operator(rng, {2, 2, 1}).homogeneous_dimension().Q, 2 + 6 + 5);
}

TEST(Operator, DilationDeterminant) {
  Rng rng(2);
  const OUOperator op = testing::random_operator(rng, {2, 1, 1});
  const int Q = op.homogeneous_dimension().Q;
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double lam = u(rng);
    const double det = op.dilation_weights(lam).prod();
    EXPECT_LT(std::abs(det / std::pow(lam, Q) - 1.0), 1e-10);
  }
}

TEST(Operator, CovarianceDilationIdentity) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const OUOperator op = testing::random_operator(rng, {2, 2, 1});
    const double t = std::exp(u(rng));
    const Matrix d = op.dilation_weights(std::sqrt(t)).asDiagonal();
    const Matrix lhs = op.covariance_C(t);
    const Matrix rhs = d * op.covariance_C(1.0) * d;
    EXPECT_LT((lhs - rhs).norm() / rhs.norm(), 1e-10);
  }
}

TEST(Operator, GroupAxioms) {
  Rng rng(4);
  const OUOperator op = testing::random_operator(rng, {2, 1});
  auto rand_point = [&] { return GroupPoint{testing::random_vector(rng, 3, 2.0), testing::random_vector(rng, 1, 2.0)[0]}; };
  auto close = [](const GroupPoint& a, const GroupPoint& b) {
    return (a.x - b.x).cwiseAbs().maxCoeff() / std::max(1.0, b.x.cwiseAbs().maxCoeff()) < 1e-10 &&
           std::abs(a.t - b.t) / std::max(1.0, std::abs(b.t)) < 1e-10;
  };
  const GroupPoint e{Vector::Zero(3), 0.0};
  for (int i = 0; i < 100; ++i) {
    const GroupPoint a = rand_point(), b = rand_point(), c = rand_point();
    EXPECT_TRUE(close(op.compose(op.compose(a, b), c), op.compose(a, op.compose(b, c))));
    EXPECT_TRUE(close(op.compose(a, e), a));
    EXPECT_TRUE(close(op.compose(e, a), a));
    EXPECT_TRUE(close(op.compose(a, op.invert(a)), e));
    EXPECT_TRUE(close(op.compose(op.invert(a), a), e));
    // Dilations are group automorphisms.
    const double lam = 0.3 + std::abs(c.t);
    EXPECT_TRUE(close(op.dilate(lam, op.compose(a, b)), op.compose(op.dilate(lam, a), op.dilate(lam, b))));
  }
}

TEST(Operator, KolmogorovGroupExamples) {
  const OUOperator op = OUOperator::kolmogorov();
  const GroupPoint z{Vector::Unit(2, 0), 1.0};
  const GroupPoint inv = op.invert(z);
  EXPECT_NEAR(inv.x[0], -1.0, 1e-15);
  EXPECT_NEAR(inv.x[1], -1.0, 1e-15);
  EXPECT_EQ(inv.t, -1.0);
  // (x, t) o (x', t') = (x' + E(t') x, t + t').
  const GroupPoint w{Vector{{0.5, 2.0}}, 0.25};
  const GroupPoint zw = op.compose(z, w);
  EXPECT_NEAR(zw.x[0], 1.5, 1e-15);
  EXPECT_NEAR(zw.x[1], 2.0 - 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(zw.t, 1.25);
  const Vector d = op.dilate_space(2.0, Vector{{1.0, 1.0}});
  EXPECT_DOUBLE_EQ(d[0], 2.0);
  EXPECT_DOUBLE_EQ(d[1], 8.0);
}

TEST(Operator, ValidationGrid) {
  const auto grid = covariance_validation_grid();
  ASSERT_EQ(grid.size(), 25u);
  EXPECT_NEAR(grid.front(), 1e-6, 1e-18);
  EXPECT_NEAR(grid.back(), 1e3, 1e-9);
}

}  // namespace
}  // namespace kolmo
