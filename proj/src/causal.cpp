#include "lorentz/causal.hpp"

#include <algorithm>
#include <cmath>

#include "lorentz/error.hpp"
#include "lorentz/quadrature.hpp"

namespace lorentz {

std::string to_string(CausalRelation r) {
  switch (r) {
    case CausalRelation::Equal: return "equal";
    case CausalRelation::ChronologicalFuture: return "chronological_future";
    case CausalRelation::NullBoundaryFuture: return "null_boundary_future";
    case CausalRelation::ChronologicalPast: return "chronological_past";
    case CausalRelation::NullBoundaryPast: return "null_boundary_past";
    case CausalRelation::Unrelated: return "unrelated";
  }
  return "?";
}

std::string to_string(SurfaceSide side) {
  switch (side) {
    case SurfaceSide::PastOfS: return "past_of_s";
    case SurfaceSide::OnS: return "on_s";
    case SurfaceSide::FutureOfS: return "future_of_s";
  }
  return "?";
}

double chronological_margin(const Spacetime& s, const Point& p, const Point& q) {
  return (q.t() - p.t()) - s.spatial_separation(p, q);
}

CausalRelation classify_pair(const Spacetime& s, const Point& p, const Point& q) {
  const Vector d = s.displacement(p, q);
  const double dt = d[0];
  const double m = d.tail(s.dim() - 1).norm();
  if (dt == 0.0 && m == 0.0) return CausalRelation::Equal;
  const double tol = s.null_tolerance();
  const double gap = std::abs(dt) - m;
  if (gap > tol) return dt > 0.0 ? CausalRelation::ChronologicalFuture : CausalRelation::ChronologicalPast;
  if (gap >= -tol && dt != 0.0) {
    return dt > 0.0 ? CausalRelation::NullBoundaryFuture : CausalRelation::NullBoundaryPast;
  }
  return CausalRelation::Unrelated;
}

bool in_causal_past(const Spacetime& s, const Point& x, const Point& apex) {
  const CausalRelation r = classify_pair(s, x, apex);
  return r == CausalRelation::Equal || is_future_type(r);
}

bool in_causal_future(const Spacetime& s, const Point& x, const Point& apex) {
  const CausalRelation r = classify_pair(s, apex, x);
  return r == CausalRelation::Equal || is_future_type(r);
}

bool in_chronological_past(const Spacetime& s, const Point& x, const Point& apex) {
  return classify_pair(s, x, apex) == CausalRelation::ChronologicalFuture;
}

bool in_chronological_future(const Spacetime& s, const Point& x, const Point& apex) {
  return classify_pair(s, apex, x) == CausalRelation::ChronologicalFuture;
}

SurfaceSide surface_relation(const Spacetime&, const Point& x, const CauchySurface& S) {
  if (x.t() > S.level) return SurfaceSide::FutureOfS;
  if (x.t() < S.level) return SurfaceSide::PastOfS;
  return SurfaceSide::OnS;
}

double cone_trace_diameter(const Spacetime& s, const Point& p, const CauchySurface& S) {
  const double depth = S.level - p.t();
  if (!(depth > 0.0)) {
    throw Error(ErrorKind::PreconditionViolated, "cone trace needs a point strictly below the surface");
  }
  switch (s.kind()) {
    case Spacetime::Kind::Minkowski:
      return 2.0 * depth;
    case Spacetime::Kind::FlatCylinder:
      return std::min(2.0 * depth, s.circumference());
    case Spacetime::Kind::ConformallyFlat: {
      // Induced metric on S is Omega(tau, x)^2 dx^2.
      const GaussLegendre rule(32);
      const double x0 = p[1];
      return composite_integral(rule, x0 - depth, x0 + depth, 8,
                                [&](double x) { return s.factor()(S.level, x); });
    }
  }
  return 0.0;
}

SurfaceTrace chronological_trace(const Spacetime& s, const Point& apex, const CauchySurface& S) {
  if (s.dim() != 2) throw Error(ErrorKind::Unsupported, "surface traces are implemented for 1+1 entries");
  return {apex[1], std::abs(apex.t() - S.level)};
}

namespace {

double center_gap(const Spacetime& s, double a, double b) {
  double d = b - a;
  if (s.periodic()) d = wrap_angle(d, s.circumference());
  return std::abs(d);
}

}  // namespace

bool trace_contains(const Spacetime& s, const SurfaceTrace& outer, const SurfaceTrace& inner) {
  if (inner.radius <= 0.0) return true;
  if (s.periodic()) {
    const double half = 0.5 * s.circumference();
    if (outer.radius > half) return true;  // outer trace is the whole circle
    if (inner.radius > half) return false;
  }
  return center_gap(s, outer.center, inner.center) + inner.radius <= outer.radius;
}

bool traces_disjoint(const Spacetime& s, const SurfaceTrace& a, const SurfaceTrace& b) {
  return center_gap(s, a.center, b.center) > a.radius + b.radius;
}

}  // namespace lorentz
