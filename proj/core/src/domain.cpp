#include "kolmo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kolmo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_dim(const Domain& a, const Domain& b) {
  if (a.dim() != b.dim()) throw StructuralError("domain dimensions differ");
}

Vector filled(int n, double v) { return Vector::Constant(n, v); }

}  // namespace

Domain::Domain(Oracle oracle, Vector lower, Vector upper, std::string tag)
    : oracle_(std::make_shared<const Oracle>(std::move(oracle))),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      tag_(std::move(tag)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw StructuralError("bounding box corners must share a positive dimension");
  }
  if ((lower_.array() >= upper_.array()).any()) {
    throw StructuralError("empty bounding box for domain '" + tag_ + "'");
  }
}

bool Domain::bounded() const { return lower_.allFinite() && upper_.allFinite(); }

double Domain::diameter() const { return bounded() ? (upper_ - lower_).norm() : kInf; }

double Domain::default_epsilon() const { return bounded() ? 1e-6 * diameter() : 1e-6; }

bool contains(const Domain& d, const Vector& x) { return d.contains(x); }

Domain whole_space(int n) {
  return Domain([](const Vector&) { return true; }, filled(n, -kInf), filled(n, kInf), "whole_space");
}

Domain empty_set(int n) {
  // The box of the empty set cannot be empty itself; any box bounds no points.
  return Domain([](const Vector&) { return false; }, filled(n, -1.0), filled(n, 1.0), "empty");
}

Domain ball(const Vector& center, double radius) {
  if (!(radius > 0.0)) throw StructuralError("ball radius must be positive");
  const double r2 = radius * radius;
  return Domain([center, r2](const Vector& x) { return (x - center).squaredNorm() < r2; },
                center.array() - radius, center.array() + radius, "ball");
}

Domain box(const Vector& lower, const Vector& upper) {
  return Domain(
      [lower, upper](const Vector& x) {
        return (x.array() > lower.array()).all() && (x.array() < upper.array()).all();
      },
      lower, upper, "box");
}

Domain halfspace(const Vector& normal, double offset) {
  if (normal.norm() == 0.0) throw StructuralError("halfspace normal must be nonzero");
  const int n = static_cast<int>(normal.size());
  Vector lo = filled(n, -kInf), hi = filled(n, kInf);
  // Axis-aligned halfspaces have one finite face.
  int nonzero = 0, axis = -1;
  for (int i = 0; i < n; ++i) {
    if (normal[i] != 0.0) ++nonzero, axis = i;
  }
  if (nonzero == 1) {
    if (normal[axis] > 0) hi[axis] = offset / normal[axis];
    else lo[axis] = offset / normal[axis];
  }
  return Domain([normal, offset](const Vector& x) { return normal.dot(x) < offset; }, lo, hi,
                "halfspace");
}

Domain anisotropic_cone(const Vector& vertex, const Vector& axis, double radius, double scale_max,
                        const Eigen::VectorXi& exponents) {
  const int n = static_cast<int>(vertex.size());
  if (axis.size() != n || exponents.size() != n) throw StructuralError("cone parameters disagree in dimension");
  if (!(radius > 0.0) || !(scale_max > 0.0)) throw StructuralError("cone radius and scale must be positive");
  if (radius >= axis.norm()) throw StructuralError("cone radius must be smaller than |axis|");
  if (exponents.minCoeff() < 1) throw StructuralError("cone exponents must be positive integers");

  // The orbit at scale s is the ball D_s(B(axis, radius)); its box spans
  // s^e (axis_i +- radius). Scales in (0, scale_max] also include the vertex.
  Vector lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    const double f = std::pow(scale_max, exponents[i]);
    lo[i] = vertex[i] + std::min(0.0, f * (axis[i] - radius));
    hi[i] = vertex[i] + std::max(0.0, f * (axis[i] + radius));
  }

  const double outer = axis.norm() + radius, inner = axis.norm() - radius;
  auto oracle = [vertex, axis, radius, scale_max, exponents, outer, inner](const Vector& x) {
    const Vector u = x - vertex;
    if (u.squaredNorm() == 0.0) return false;
    const Eigen::Index n = u.size();
    const double r2 = radius * radius;
    // |D_{1/s} u| decreases in s and must lie in (inner, outer), which pins s
    // to [s_lo, s_hi] coordinatewise.
    double log_lo = -INFINITY, log_hi = -INFINITY;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      if (u[i] == 0.0) continue;
      const double a = std::log(std::abs(u[i]));
      log_lo = std::max(log_lo, (a - std::log(outer)) / exponents[i]);
      log_hi = std::max(log_hi, (a + std::log(sqrt_n / inner)) / exponents[i]);
    }
    log_hi = std::min(log_hi, std::log(scale_max));
    if (!(log_lo <= log_hi)) return false;
    auto miss = [&](double log_s) {
      const double w = std::exp(-log_s);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        double f = u[i];
        for (int e = 0; e < exponents[i]; ++e) f *= w;
        const double d = f - axis[i];
        acc += d * d;
      }
      return acc;
    };
    constexpr int kScan = 48;
    const double span = log_hi - log_lo;
    int best = 0;
    double best_val = INFINITY;
    for (int k = 0; k <= kScan; ++k) {
      const double v = miss(log_lo + span * k / kScan);
      if (v < r2) return true;
      if (v < best_val) best_val = v, best = k;
    }
    double a = log_lo + span * std::max(best - 1, 0) / kScan;
    double b = log_lo + span * std::min(best + 1, kScan) / kScan;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = miss(c), fd = miss(d);
    for (int it = 0; it < 60; ++it) {
      if (fc < r2 || fd < r2) return true;
      if (fc < fd) {
        b = d, d = c, fd = fc;
        c = b - phi * (b - a);
        fc = miss(c);
      } else {
        a = c, c = d, fc = fd;
        d = a + phi * (b - a);
        fd = miss(d);
      }
    }
    return std::min(fc, fd) < r2;
  };
  return Domain(oracle, lo, hi, "cone");
}

Domain complement(const Domain& d) {
  auto oracle = [d](const Vector& x) { return !d.contains(x); };
  return Domain(oracle, filled(d.dim(), -kInf), filled(d.dim(), kInf), "complement(" + d.tag() + ")");
}

Domain set_union(const Domain& a, const Domain& b) {
  require_same_dim(a, b);
  auto oracle = [a, b](const Vector& x) { return a.contains(x) || b.contains(x); };
  return Domain(oracle, a.lower().cwiseMin(b.lower()), a.upper().cwiseMax(b.upper()),
                "union(" + a.tag() + "," + b.tag() + ")");
}

Domain intersect(const Domain& a, const Domain& b) {
  require_same_dim(a, b);
  auto oracle = [a, b](const Vector& x) { return a.contains(x) && b.contains(x); };
  return Domain(oracle, a.lower().cwiseMax(b.lower()), a.upper().cwiseMin(b.upper()),
                "intersect(" + a.tag() + "," + b.tag() + ")");
}

Domain puncture(const Domain& d, const Vector& p, double rho) {
  if (p.size() != d.dim()) throw StructuralError("puncture point dimension mismatch");
  if (rho < 0.0) throw StructuralError("puncture radius must be nonnegative");
  const double r2 = rho * rho;
  auto oracle = [d, p, r2](const Vector& x) { return d.contains(x) && (x - p).squaredNorm() > r2; };
  return Domain(oracle, d.lower(), d.upper(), "puncture(" + d.tag() + ")");
}

double locate_crossing(const Domain& d, const Vector& a, const Vector& b, double tol) {
  const bool in_a = d.contains(a);
  if (in_a == d.contains(b)) throw DomainError("segment endpoints do not straddle the boundary");
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (d.contains(a + mid * (b - a)) == in_a) lo = mid;
    else hi = mid;
  }
  return hi;
}

bool near_boundary(const Domain& d, const Vector& x, double eps) {
  const bool in = d.contains(x);
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (double s : {eps, -eps}) {
      probe[i] = x[i] + s;
      if (d.contains(probe) != in) return true;
    }
    probe[i] = x[i];
  }
  return false;
}

Cylinder::Cylinder(Domain base_, double t0_, double t1_) : base(std::move(base_)), t0(t0_), t1(t1_) {
  if (!(t0 < t1)) throw StructuralError("cylinder requires t0 < t1");
}

const char* to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::Lateral: return "lateral";
    case BoundaryClass::Bottom: return "bottom";
    case BoundaryClass::Top: return "top";
    case BoundaryClass::Interior: return "interior";
    case BoundaryClass::Exterior: return "exterior";
  }
  return "exterior";
}

bool BoundaryQuery::parabolic() const {
  return classification == BoundaryClass::Lateral || classification == BoundaryClass::Bottom;
}

BoundaryQuery classify_boundary(const Cylinder& c, const GroupPoint& z, double eps) {
  if (!(eps > 0.0)) throw DomainError("boundary tolerance must be positive");
  BoundaryQuery q{z, BoundaryClass::Exterior};
  if (z.t < c.t0 - eps || z.t > c.t1 + eps) return q;

  const bool inside = c.base.contains(z.x);
  const bool edge = near_boundary(c.base, z.x, eps);
  if (std::abs(z.t - c.t0) <= eps) {
    q.classification = (inside || edge) ? BoundaryClass::Bottom : BoundaryClass::Exterior;
  } else if (edge) {
    q.classification = BoundaryClass::Lateral;
  } else if (!inside) {
    q.classification = BoundaryClass::Exterior;
  } else if (std::abs(z.t - c.t1) <= eps) {
    q.classification = BoundaryClass::Top;
  } else {
    q.classification = BoundaryClass::Interior;
  }
  return q;
}

}  // namespace kolmo
