#include "kolmo/domain.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace kolmo {
namespace {

Vector v2(double a, double b) { return Vector{{a, b}}; }

TEST(Domain, Primitives) {
  const Domain b = ball(v2(0, 0), 1.0);
  EXPECT_TRUE(b.contains(v2(0.5, 0.5)));
  EXPECT_FALSE(b.contains(v2(1.0, 0.0)));  // open
  EXPECT_FALSE(b.contains(v2(1.0, 1.0)));
  EXPECT_TRUE(b.bounded());
  EXPECT_NEAR(b.diameter(), std::sqrt(8.0), 1e-15);

  const Domain bx = box(v2(-1, 0), v2(1, 2));
  EXPECT_TRUE(bx.contains(v2(0, 1)));
  EXPECT_FALSE(bx.contains(v2(1, 1)));
  EXPECT_FALSE(bx.contains(v2(0, 2.5)));
  EXPECT_THROW(box(v2(0, 0), v2(0, 1)), StructuralError);

  const Domain h = halfspace(v2(0, 1), 0.5);
  EXPECT_TRUE(h.contains(v2(100, 0.4)));
  EXPECT_FALSE(h.contains(v2(0, 0.5)));
  EXPECT_FALSE(h.bounded());
  EXPECT_EQ(h.default_epsilon(), 1e-6);

  EXPECT_TRUE(whole_space(2).contains(v2(1e9, -1e9)));
  EXPECT_FALSE(empty_set(2).contains(v2(0, 0)));
}

TEST(Domain, Combinators) {
  const Domain a = box(v2(0, 0), v2(2, 2)), b = box(v2(1, 1), v2(3, 3));
  const Vector only_a = v2(0.5, 0.5), both = v2(1.5, 1.5), only_b = v2(2.5, 2.5), none = v2(5, 5);
  const Domain u = set_union(a, b), i = intersect(a, b), c = complement(a);
  for (const auto& [x, in_a, in_b] : {std::tuple{only_a, true, false}, std::tuple{both, true, true},
                                      std::tuple{only_b, false, true}, std::tuple{none, false, false}}) {
    EXPECT_EQ(u.contains(x), in_a || in_b);
    EXPECT_EQ(i.contains(x), in_a && in_b);
    EXPECT_EQ(c.contains(x), !in_a);
  }
  EXPECT_TRUE(i.bounded());
  EXPECT_NEAR(i.lower()[0], 1.0, 0.0);
  EXPECT_NEAR(u.upper()[1], 3.0, 0.0);
  EXPECT_FALSE(c.bounded());
  EXPECT_THROW(set_union(a, ball(Vector::Zero(3), 1.0)), StructuralError);
}

TEST(Domain, Puncture) {
  const Domain p = puncture(ball(v2(0, 0), 1.0), v2(0, 0), 0.0);
  EXPECT_FALSE(p.contains(v2(0, 0)));
  EXPECT_TRUE(p.contains(v2(1e-9, 0)));
  const Domain q = puncture(ball(v2(0, 0), 1.0), v2(0, 0), 0.25);
  EXPECT_FALSE(q.contains(v2(0.25, 0)));  // closed ball removed
  EXPECT_TRUE(q.contains(v2(0.26, 0)));
}

TEST(Domain, AnisotropicCone) {
  const Eigen::VectorXi exps = Eigen::Vector2i(1, 3);
  const Domain cone = anisotropic_cone(v2(0, 0), v2(1, 0), 0.5, 1.0, exps);
  EXPECT_FALSE(cone.contains(v2(0, 0)));
  for (double s : {1e-4, 1e-2, 0.3, 1.0}) {
    EXPECT_TRUE(cone.contains(v2(s, 0.0))) << s;
    // D_s of an interior point of the generating ball.
    EXPECT_TRUE(cone.contains(v2(1.2 * s, 0.3 * s * s * s))) << s;
  }
  EXPECT_FALSE(cone.contains(v2(1.6, 0.0)));  // beyond scale_max
  EXPECT_FALSE(cone.contains(v2(-0.1, 0.0)));
  // Anisotropic, not circular: at x1 = 0.01 the set is much thinner than 0.005.
  EXPECT_FALSE(cone.contains(v2(0.01, 0.003)));
  // All exponents 1: ordinary cone of half-angle asin(0.5) = 30 degrees.
  const Domain flat = anisotropic_cone(v2(0, 0), v2(1, 0), 0.5, 1.0, Eigen::Vector2i(1, 1));
  EXPECT_TRUE(flat.contains(v2(0.5, 0.5 * std::tan(0.5) )));
  EXPECT_FALSE(flat.contains(v2(0.5, 0.5 * std::tan(0.55))));
  EXPECT_THROW(anisotropic_cone(v2(0, 0), v2(1, 0), 1.5, 1.0, exps), StructuralError);
}

TEST(Domain, LocateCrossing) {
  const Domain b = ball(v2(0, 0), 1.0);
  const Vector a = v2(0.2, 0.1), c = v2(3.0, 1.0);
  const double s = locate_crossing(b, a, c);
  // |a + s (c - a)| = 1 solved in closed form.
  const Vector d = c - a;
  const double qa = d.squaredNorm(), qb = 2 * a.dot(d), qc = a.squaredNorm() - 1.0;
  const double exact = (-qb + std::sqrt(qb * qb - 4 * qa * qc)) / (2 * qa);
  EXPECT_NEAR(s, exact, 1e-10);
  EXPECT_THROW(locate_crossing(b, a, a), DomainError);
}

TEST(Domain, NearBoundary) {
  const Domain b = ball(v2(0, 0), 1.0);
  EXPECT_TRUE(near_boundary(b, v2(1.0, 0), 1e-6));
  EXPECT_TRUE(near_boundary(b, v2(0.9999995, 0), 1e-6));
  EXPECT_FALSE(near_boundary(b, v2(0.5, 0), 1e-6));
}

TEST(Domain, CylinderClassification) {
  EXPECT_THROW(Cylinder(ball(v2(0, 0), 1.0), 1.0, 1.0), StructuralError);
  const Cylinder c(ball(v2(0, 0), 1.0), 0.0, 1.0);
  const double eps = 1e-6;
  EXPECT_EQ(classify_boundary(c, {v2(0, 0), 0.5}, eps).classification, BoundaryClass::Interior);
  EXPECT_EQ(classify_boundary(c, {v2(1, 0), 0.5}, eps).classification, BoundaryClass::Lateral);
  EXPECT_EQ(classify_boundary(c, {v2(0, 0), 0.0}, eps).classification, BoundaryClass::Bottom);
  EXPECT_EQ(classify_boundary(c, {v2(1, 0), 0.0}, eps).classification, BoundaryClass::Bottom);
  EXPECT_EQ(classify_boundary(c, {v2(0, 0), 1.0}, eps).classification, BoundaryClass::Top);
  EXPECT_EQ(classify_boundary(c, {v2(2, 0), 0.5}, eps).classification, BoundaryClass::Exterior);
  EXPECT_EQ(classify_boundary(c, {v2(0, 0), 1.5}, eps).classification, BoundaryClass::Exterior);
  EXPECT_EQ(classify_boundary(c, {v2(0, 0), -0.5}, eps).classification, BoundaryClass::Exterior);
  EXPECT_TRUE(classify_boundary(c, {v2(1, 0), 0.5}, eps).parabolic());
  EXPECT_TRUE(classify_boundary(c, {v2(0, 0), 0.0}, eps).parabolic());
  EXPECT_FALSE(classify_boundary(c, {v2(0, 0), 1.0}, eps).parabolic());
  EXPECT_STREQ(to_string(BoundaryClass::Lateral), "lateral");
}

}  // namespace
}  // namespace kolmo
