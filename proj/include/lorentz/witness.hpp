#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/causal.hpp"
#include "lorentz/cover.hpp"
#include "lorentz/eikonal.hpp"
#include "lorentz/field.hpp"

namespace lorentz {

/// Above: generators sit below S and the field sums d(g, z); it vanishes on the
/// causal past of the excluded points. Below is the time-reversed version.
enum class CoverSide { Above, Below };

std::string to_string(CoverSide side);

struct CoveringOptions {
  double depth = 0.15;
  double r_max = 1.0;
  double overlap = 0.25;
  /// Surface segment to cover on Minkowski(2); ignored on the cylinder.
  std::optional<std::pair<double, double>> extent;
  /// Smallest depth tried when the default depth cannot be certified.
  double min_depth = 1e-3;
};

struct CoveringChecklist {
  bool generators_strictly_off_surface = false;
  bool generators_outside_excluded = false;
  bool diameters_below_r_max = false;
  bool coverage_certified = false;
  bool zero_on_excluded = false;
  bool positive_on_future = false;
  int zero_samples = 0;
  int positive_samples = 0;

  bool all() const {
    return generators_strictly_off_surface && generators_outside_excluded && diameters_below_r_max &&
           coverage_certified && zero_on_excluded && positive_on_future;
  }
};

/// Finite sum of distance functions from points just off a Cauchy surface,
/// admissible where it is positive and zero on a prescribed causal cone.
class CoveringWitness {
 public:
  CauchySurface surface;
  CoverSide side = CoverSide::Above;
  std::vector<Point> excluded;
  std::vector<Point> guards;
  std::vector<Point> generators;  // sorted by spatial coordinate
  double depth = 0.0;
  double step = 0.0;
  double r_max = 1.0;
  SurfaceDomain domain;
  CoverCertificate certificate;

  const ScalarField& field() const { return *field_; }

  /// Generators whose distance term is nonzero at z.
  int contributing_generators(const Spacetime& s, const Point& z) const;

  /// Upper bound on contributing_generators from the cone geometry alone:
  /// a window of half-width |t(z) - t(g)| holds at most width/step + 2
  /// generators per allowed arc.
  int contribution_bound(const Spacetime& s, const Point& z) const;

  /// Re-verifies the four defining properties on seeded samples.
  CoveringChecklist verify(const Spacetime& s, int samples = 200, std::uint64_t seed = 1,
                           double height = 2.0) const;

  std::size_t allowed_arcs = 0;

 private:
  friend CoveringWitness build_covering_witness(const Spacetime&, const CauchySurface&, CoverSide,
                                                std::vector<Point>, std::vector<Point>, const CoveringOptions&);
  std::optional<ScalarField> field_;
};

/// Places generators at `depth` off S, stepped by depth * (1 - overlap) along
/// each arc of the generator line that avoids the excluded cones, and
/// certifies that their traces cover S minus the guards' traces. Halves the
/// depth until certification succeeds or min_depth is reached.
CoveringWitness build_covering_witness(const Spacetime& s, const CauchySurface& S, CoverSide side,
                                       std::vector<Point> excluded, std::vector<Point> guards,
                                       const CoveringOptions& options = {});

enum class WitnessCase { Equality, Reverse, Unrelated };

std::string to_string(WitnessCase c);

struct NamedPoint {
  std::string name;
  Point point;
};

struct WitnessOptions {
  CoveringOptions covering;
  double initial_offset = 0.1;
  double min_offset = 1e-12;
  int verification_resolution = 101;
  double verification_margin = 1.0;
};

/// One of the case witnesses. `value_difference` is f(q) - f(p) for the pair
/// the witness was requested for.
struct WitnessField {
  WitnessCase kind = WitnessCase::Equality;
  Point p;
  Point q;
  double epsilon = 0.0;
  /// Unrelated case: true when q is earlier than p, so the surface passes
  /// through p and the auxiliary names refer to (q, p) in that order.
  bool roles_swapped = false;
  std::vector<NamedPoint> auxiliary;
  std::vector<double> offsets_tried;
  std::optional<CoveringWitness> upper;  // f1
  std::optional<CoveringWitness> lower;  // f2
  double f_p = 0.0;
  double f_q = 0.0;
  double value_difference = 0.0;
  GridSpec verification_box;

  const ScalarField& field() const { return *field_; }

  std::optional<ScalarField> field_;
};

/// Box around p and q used to certify a witness: t padded by the margin, and
/// the whole circle (cylinder) or the padded x-range (Minkowski).
GridSpec verification_box(const Spacetime& s, const Point& p, const Point& q, int resolution, double margin);

/// f = f1 - f2 + d_{p'} with f(q) - f(p) in [d(p,q), d(p,q) + eps). Requires p < q.
WitnessField build_equality_witness(const Spacetime& s, const Point& p, const Point& q, double epsilon,
                                    const WitnessOptions& options = {});

/// The equality witness for (q, p); f(q) - f(p) <= 0. Requires p > q.
WitnessField build_reverse_witness(const Spacetime& s, const Point& p, const Point& q,
                                   const WitnessOptions& options = {});

/// f = f1 - f2 + d_{p'} + d_{q'} with |f(q) - f(p)| < eps. Requires p, q unrelated.
WitnessField build_unrelated_witness(const Spacetime& s, const Point& p, const Point& q, double epsilon,
                                     const WitnessOptions& options = {});

}  // namespace lorentz
