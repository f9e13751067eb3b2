#pragma once

#include <initializer_list>
#include <numbers>
#include <string>

#include <Eigen/Dense>

namespace lorentz {

// Coordinates never exceed four components, so storage stays on the stack.
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Covector = Vector;

inline constexpr double kDefaultNullTolerance = 1e-10;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A chart point. Index 0 is the time function; for the flat cylinder index 1
/// is the angle, kept in [0, circumference) by Spacetime::point().
struct Point {
  Vector coords;

  int dim() const { return static_cast<int>(coords.size()); }
  double t() const { return coords[0]; }
  double operator[](int i) const { return coords[i]; }
};

struct TangentVector {
  Point base;
  Vector components;
};

enum class CausalClass { Timelike, Null, Spacelike, Zero };
enum class TimeOrientation { Future, Past, None };

struct CausalCharacter {
  CausalClass kind = CausalClass::Zero;
  TimeOrientation orientation = TimeOrientation::None;

  bool operator==(const CausalCharacter&) const = default;
  bool causal() const { return kind == CausalClass::Timelike || kind == CausalClass::Null; }
};

std::string to_string(CausalClass c);
std::string to_string(TimeOrientation o);

/// Positive conformal factors available for the 1+1 conformally flat entries.
class ConformalFactor {
 public:
  enum class Shape { Constant, TimeQuadratic, Bump };

  /// Omega = c.
  static ConformalFactor constant(double c);
  /// Omega = a + b t^2, with a > 0 and b >= 0.
  static ConformalFactor time_quadratic(double a, double b);
  /// Omega = 1 + amplitude * exp(-(t^2 + x^2) / width^2), amplitude > -1.
  static ConformalFactor bump(double amplitude, double width);

  double operator()(double t, double x) const;

  Shape shape() const { return shape_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  std::string name() const;

 private:
  ConformalFactor(Shape shape, double a, double b) : shape_(shape), a_(a), b_(b) {}

  Shape shape_;
  double a_;
  double b_;
};

/// One entry of the analytic spacetime catalog. Signature is (-,+,...,+) and
/// d/dt is future pointing everywhere in every chart.
class Spacetime {
 public:
  enum class Kind { Minkowski, FlatCylinder, ConformallyFlat };

  static Spacetime minkowski(int dim);
  static Spacetime flat_cylinder(double circumference = kTwoPi);
  static Spacetime conformally_flat(ConformalFactor factor);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double circumference() const { return circumference_; }
  const ConformalFactor& factor() const { return factor_; }
  bool periodic() const { return kind_ == Kind::FlatCylinder; }
  bool flat() const { return kind_ != Kind::ConformallyFlat; }

  double null_tolerance() const { return tol_null_; }
  Spacetime with_null_tolerance(double tol) const;

  /// Validates dimension and finiteness; reduces the angle on the cylinder.
  Point point(const Vector& coords) const;
  Point point(std::initializer_list<double> coords) const;

  /// Coordinate displacement from `from` to `to`. On the cylinder the angular
  /// part is the representative of least magnitude, in [-C/2, C/2).
  Vector displacement(const Point& from, const Point& to) const;

  /// Spatial separation |dx| of the minimal-winding displacement.
  double spatial_separation(const Point& from, const Point& to) const;

  /// Conformal weight Omega at x (1 for the flat entries).
  double conformal_weight(const Point& x) const;

  std::string name() const;

 private:
  Spacetime(Kind kind, int dim, double circumference, ConformalFactor factor)
      : kind_(kind), dim_(dim), circumference_(circumference), factor_(factor) {}

  Kind kind_;
  int dim_;
  double circumference_;
  ConformalFactor factor_;
  double tol_null_ = kDefaultNullTolerance;
};

/// Reduces a signed angular difference to [-C/2, C/2).
double wrap_angle(double delta, double circumference);

Matrix metric_components(const Spacetime& s, const Point& x);
double inner(const Spacetime& s, const Point& x, const TangentVector& v, const TangentVector& w);
CausalCharacter causal_character(const Spacetime& s, const Point& x, const TangentVector& v);

/// Metric gradient: v^mu = g^{mu nu}(x) df_nu.
TangentVector raise_gradient(const Spacetime& s, const Point& x, const Covector& df);

/// Chart-level helpers for callers that already hold raw components.
double inner_components(const Spacetime& s, const Point& x, const Vector& v, const Vector& w);
CausalCharacter classify_components(double norm2, double time_component, bool zero, double tol_null);

}  // namespace lorentz
