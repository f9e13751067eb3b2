#pragma once

#include <string>

#include "lorentz/geometry.hpp"

namespace lorentz {

enum class CausalRelation {
  Equal,
  ChronologicalFuture,  // p << q
  NullBoundaryFuture,   // p < q on the light cone, d = 0
  ChronologicalPast,
  NullBoundaryPast,
  Unrelated,
};

std::string to_string(CausalRelation r);

inline bool is_future_type(CausalRelation r) {
  return r == CausalRelation::ChronologicalFuture || r == CausalRelation::NullBoundaryFuture;
}
inline bool is_past_type(CausalRelation r) {
  return r == CausalRelation::ChronologicalPast || r == CausalRelation::NullBoundaryPast;
}

/// The level set S_tau = {t = tau}; spacelike and Cauchy in every catalog entry.
struct CauchySurface {
  double level = 0.0;
};

enum class SurfaceSide { PastOfS, OnS, FutureOfS };

std::string to_string(SurfaceSide side);

/// Exact relation of q to p. All catalog entries share the flat light cone in
/// their charts; on the cylinder the spatial gap is the minimal winding one.
CausalRelation classify_pair(const Spacetime& s, const Point& p, const Point& q);

/// t(q) - t(p) - |dx|: positive iff q is in the chronological future of p
/// (up to the null tolerance), negative margins mean q is outside J+(p).
double chronological_margin(const Spacetime& s, const Point& p, const Point& q);

/// Membership of x in J^-(apex), J^+(apex), I^-(apex) and I^+(apex).
bool in_causal_past(const Spacetime& s, const Point& x, const Point& apex);
bool in_causal_future(const Spacetime& s, const Point& x, const Point& apex);
bool in_chronological_past(const Spacetime& s, const Point& x, const Point& apex);
bool in_chronological_future(const Spacetime& s, const Point& x, const Point& apex);

SurfaceSide surface_relation(const Spacetime& s, const Point& x, const CauchySurface& S);

/// Diameter of I^+(p) cap S in the metric induced on S. Requires t(p) < tau.
double cone_trace_diameter(const Spacetime& s, const Point& p, const CauchySurface& S);

/// The open interval {x : |x - center| < radius} (minimal winding on the
/// cylinder) that the chronological cone of `apex` cuts out of S. Only for the
/// 1+1 catalog entries.
struct SurfaceTrace {
  double center = 0.0;
  double radius = 0.0;
};

SurfaceTrace chronological_trace(const Spacetime& s, const Point& apex, const CauchySurface& S);

/// Whether the open trace `inner` lies inside the open trace `outer`.
bool trace_contains(const Spacetime& s, const SurfaceTrace& outer, const SurfaceTrace& inner);

/// Whether the closures of two traces are disjoint.
bool traces_disjoint(const Spacetime& s, const SurfaceTrace& a, const SurfaceTrace& b);

}  // namespace lorentz
