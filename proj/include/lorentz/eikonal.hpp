#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "lorentz/field.hpp"
#include "lorentz/geometry.hpp"

namespace lorentz {

/// Sampling grid for the essential-supremum estimate.
struct GridSpec {
  std::vector<std::pair<double, double>> box;  // per-axis [lo, hi]
  std::vector<int> resolution;                 // samples per axis, endpoints included
  double exclusion_radius = 0.0;               // skip samples this close to a declared seam

  /// Same box with every axis refined from r to 2r - 1 samples (nested grids).
  GridSpec refined() const;
  std::size_t size() const;
};

struct EikonalTolerances {
  double analytic = 1e-6;
  double finite_difference = 1e-3;
  double trim_fraction = 0.02;

  double for_mode(GradientMode mode) const {
    return mode == GradientMode::Analytic ? analytic : finite_difference;
  }
};

struct AdmissibilityReport {
  double ess_sup_estimate = 0.0;
  bool orientation_ok = false;
  double violation_fraction = 0.0;
  std::size_t kept_samples = 0;
  std::size_t total_samples = 0;
  std::size_t excluded_samples = 0;
  std::size_t trimmed_samples = 0;
  double tolerance = 0.0;
  double trim_fraction = 0.0;
  bool verdict = false;
};

struct GridSample {
  Point point;
  double value = 0.0;
  double eikonal = 0.0;       // g(grad f, grad f); NaN when excluded
  CausalCharacter gradient;   // of grad f
  bool excluded = false;
};

/// g(grad f, grad f) at x. Throws UndefinedPoint within `exclusion_radius` of
/// a declared seam or where the gradient rule is undefined.
double eikonal_value(const Spacetime& s, const ScalarField& f, const Point& x, double exclusion_radius = 0.0);

/// Evaluates f, its eikonal value and gradient character on every grid node.
std::vector<GridSample> sample_grid(const Spacetime& s, const ScalarField& f, const GridSpec& grid);

/// Reduces grid samples to the admissibility verdict. Samples are ranked by
/// badness (orientation failures first, then by eikonal value) and the worst
/// floor(trim * n) are dropped before taking the max. The reduction sorts the
/// full multiset, so it does not depend on evaluation order.
AdmissibilityReport summarize_admissibility(const std::vector<GridSample>& samples, double tolerance,
                                            double trim_fraction);

AdmissibilityReport check_admissible(const Spacetime& s, const ScalarField& f, const GridSpec& grid,
                                     const EikonalTolerances& tol = {});

/// CSV with columns t,x[,y,z],f,eikonal_value,orientation_ok. Excluded
/// samples carry empty eikonal/orientation cells.
void write_grid_csv(std::ostream& out, const std::vector<GridSample>& samples);

/// |g(v,w)| - sqrt(-g(v,v)) sqrt(-g(w,w)). Both vectors must be timelike.
double inverse_cauchy_schwarz_slack(const Spacetime& s, const Point& x, const TangentVector& v,
                                    const TangentVector& w);

/// d(p,r) - d(p,q) - d(q,r) for a causal chain p <= q <= r.
double inverse_triangle_slack(const Spacetime& s, const Point& p, const Point& q, const Point& r);

/// (f(q) - f(p)) - d(p,q) for p < q.
double lower_bound_slack(const Spacetime& s, const ScalarField& f, const Point& p, const Point& q);

}  // namespace lorentz
