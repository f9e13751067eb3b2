#pragma once

#include <optional>
#include <vector>

#include "lorentz/causal.hpp"

namespace lorentz {

/// A one-dimensional Cauchy surface: the circle R/CZ or a closed segment.
struct SurfaceDomain {
  bool periodic = false;
  double circumference = 0.0;  // periodic only
  double lo = 0.0;             // segment only
  double hi = 0.0;

  static SurfaceDomain circle(double circumference) { return {true, circumference, 0.0, circumference}; }
  static SurfaceDomain segment(double lo, double hi) { return {false, 0.0, lo, hi}; }
};

struct ClosedInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Result of checking that open traces cover domain \ (union of open holes).
/// On the circle the intervals are expressed in an unrolled coordinate.
struct CoverCertificate {
  bool covered = false;
  std::vector<ClosedInterval> target;
  std::optional<double> uncovered_point;
};

/// Interval-arithmetic covering check. Every open interval is shrunk inward by
/// one ulp at each end before comparing, so a positive answer does not depend
/// on rounding of the endpoints.
CoverCertificate certify_cover(const SurfaceDomain& domain, const std::vector<SurfaceTrace>& cover,
                               const std::vector<SurfaceTrace>& holes);

}  // namespace lorentz
