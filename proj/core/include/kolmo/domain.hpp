#pragma once

// Open sets of R^N as composable membership oracles, and space-time
// cylinders over them.

#include "kolmo/operator.hpp"
#include "kolmo/types.hpp"

#include <functional>
#include <memory>
#include <string>

namespace kolmo {

class Domain {
 public:
  using Oracle = std::function<bool(const Vector&)>;

  // lower/upper bound every point the oracle reports inside; entries may be
  // infinite for unbounded sets. Throws StructuralError for an empty box.
  Domain(Oracle oracle, Vector lower, Vector upper, std::string tag);

  bool contains(const Vector& x) const { return (*oracle_)(x); }
  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const std::string& tag() const { return tag_; }
  bool bounded() const;
  // Diameter of the bounding box; infinite for unbounded sets.
  double diameter() const;
  // 1e-6 x diameter, or 1e-6 when unbounded.
  double default_epsilon() const;

 private:
  std::shared_ptr<const Oracle> oracle_;
  Vector lower_;
  Vector upper_;
  std::string tag_;
};

bool contains(const Domain& d, const Vector& x);

Domain whole_space(int n);
Domain empty_set(int n);
Domain ball(const Vector& center, double radius);
Domain box(const Vector& lower, const Vector& upper);
// {x : <normal, x> < offset}
Domain halfspace(const Vector& normal, double offset);
// Dilation orbit {vertex + D_s(w) : 0 < s <= scale_max, |w - axis| < radius}
// under per-coordinate exponents. All exponents 1 gives the ordinary open
// circular cone of half-angle asin(radius / |axis|) truncated at scale_max.
Domain anisotropic_cone(const Vector& vertex, const Vector& axis, double radius, double scale_max,
                        const Eigen::VectorXi& exponents);
Domain complement(const Domain& d);
Domain set_union(const Domain& a, const Domain& b);
Domain intersect(const Domain& a, const Domain& b);
// d minus the closed ball of radius rho around p; rho = 0 removes exactly p.
Domain puncture(const Domain& d, const Vector& p, double rho);

// Boundary crossing on the segment [inside, outside]; the endpoints must
// disagree in membership. Returns the parameter s in [0, 1] of the located
// crossing, with the bracket shrunk below tol (in segment length units).
double locate_crossing(const Domain& d, const Vector& a, const Vector& b, double tol = 1e-12);

// True when the oracle disagrees between x and one of x +- eps e_i.
bool near_boundary(const Domain& d, const Vector& x, double eps);

struct Cylinder {
  Domain base;
  double t0 = 0.0;
  double t1 = 1.0;

  Cylinder(Domain base_, double t0_, double t1_);
  double duration() const { return t1 - t0; }
};

enum class BoundaryClass { Lateral, Bottom, Top, Interior, Exterior };

const char* to_string(BoundaryClass c);

struct BoundaryQuery {
  GroupPoint point;
  BoundaryClass classification = BoundaryClass::Exterior;

  // Lateral or bottom.
  bool parabolic() const;
};

BoundaryQuery classify_boundary(const Cylinder& c, const GroupPoint& z, double eps);

}  // namespace kolmo
