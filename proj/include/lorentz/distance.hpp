#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lorentz/causal.hpp"
#include "lorentz/field.hpp"
#include "lorentz/geometry.hpp"

namespace lorentz {

/// Piecewise straight curve through chart nodes. On the cylinder the nodes
/// live in the universal cover: angles are not reduced, and each segment is
/// the straight line between consecutive raw coordinates.
struct Curve {
  std::vector<Point> nodes;
};

struct DistanceEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> closed_form;
  double gap() const { return upper - lower; }
};

inline constexpr int kDefaultQuadrature = 16;

/// Lorentzian length of a future directed causal curve, by composite
/// Gauss-Legendre quadrature per segment. Throws NonCausalSegment if any
/// sampled tangent is spacelike or past directed.
double curve_length(const Spacetime& s, const Curve& curve, int quadrature_n = kDefaultQuadrature);

/// Exact d(p, q) on the flat entries; nullopt for conformally flat ones.
std::optional<double> closed_form_distance(const Spacetime& s, const Point& p, const Point& q);

/// Same as closed_form_distance but throws Unsupported instead of returning nullopt.
double exact_distance(const Spacetime& s, const Point& p, const Point& q);

struct PathSearchOptions {
  int segments = 8;
  int restarts = 20;
  std::uint64_t seed = 0;
  int quadrature_n = kDefaultQuadrature;
  int max_sweeps = 20000;
};

struct PathSearchResult {
  double length = 0.0;
  Curve best;
  /// Best length found by each restart, in restart order.
  std::vector<double> restart_lengths;
  long evaluations = 0;
};

/// Lower bound on d(p, q): seeded multistart projected coordinate ascent over
/// the interior nodes of piecewise straight causal curves. Every curve the
/// search evaluates is causal, so the result never exceeds d(p, q).
PathSearchResult max_path_search(const Spacetime& s, const Point& p, const Point& q,
                                 const PathSearchOptions& options = {});

double max_path_distance(const Spacetime& s, const Point& p, const Point& q, int n_segments,
                         int restarts, std::uint64_t seed);

enum class DistanceDirection { FromBase, ToBase };

/// z -> d(base, z) or z -> d(z, base) with its analytic gradient. The gradient
/// is undefined on the null cone of base and on the cylinder's winding tie set.
ScalarField distance_field(const Spacetime& s, const Point& base, DistanceDirection direction);

/// Analytic differential of z -> d(base, z) (FromBase) or z -> d(z, base)
/// (ToBase); zero outside the chronological cone, nullopt on the null cone
/// and the cylinder tie set.
std::optional<Covector> distance_gradient(const Spacetime& s, const Point& base, const Point& z,
                                          DistanceDirection direction);

/// Chart distance from the point (a, b) = (time gap, spatial gap) to the seams
/// of a distance field: the future cone {a = b >= 0} and, on the cylinder,
/// the tie set {b = C/2, a >= C/2}.
double distance_seam_gap(double a, double b, std::optional<double> circumference);

}  // namespace lorentz
