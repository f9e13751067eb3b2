#include "lorentz/geometry.hpp"

#include <cmath>
#include <sstream>

#include "lorentz/error.hpp"

namespace lorentz {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::MismatchedBase: return "MismatchedBase";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NonCausalSegment: return "NonCausalSegment";
    case ErrorKind::NoCausalPath: return "NoCausalPath";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::UndefinedPoint: return "UndefinedPoint";
    case ErrorKind::NonTimelikeInput: return "NonTimelikeInput";
    case ErrorKind::ChainNotCausal: return "ChainNotCausal";
    case ErrorKind::PairNotCausal: return "PairNotCausal";
    case ErrorKind::PairNotFuture: return "PairNotFuture";
    case ErrorKind::PairNotPast: return "PairNotPast";
    case ErrorKind::PairNotUnrelated: return "PairNotUnrelated";
    case ErrorKind::CoverageImpossible: return "CoverageImpossible";
    case ErrorKind::DisjointTracesImpossible: return "DisjointTracesImpossible";
    case ErrorKind::WitnessRejected: return "WitnessRejected";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_geometric_obstruction(ErrorKind kind) {
  return kind == ErrorKind::CoverageImpossible || kind == ErrorKind::DisjointTracesImpossible ||
         kind == ErrorKind::NoCausalPath;
}

std::string to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Null: return "null";
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Zero: return "zero";
  }
  return "?";
}

std::string to_string(TimeOrientation o) {
  switch (o) {
    case TimeOrientation::Future: return "future";
    case TimeOrientation::Past: return "past";
    case TimeOrientation::None: return "none";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// ConformalFactor

ConformalFactor ConformalFactor::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::PreconditionViolated, "constant conformal factor must be positive");
  }
  return {Shape::Constant, c, 0.0};
}

ConformalFactor ConformalFactor::time_quadratic(double a, double b) {
  if (!(a > 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorKind::PreconditionViolated, "time_quadratic factor needs a > 0, b >= 0");
  }
  return {Shape::TimeQuadratic, a, b};
}

ConformalFactor ConformalFactor::bump(double amplitude, double width) {
  if (!(amplitude > -1.0) || !(width > 0.0) || !std::isfinite(amplitude) || !std::isfinite(width)) {
    throw Error(ErrorKind::PreconditionViolated, "bump factor needs amplitude > -1, width > 0");
  }
  return {Shape::Bump, amplitude, width};
}

double ConformalFactor::operator()(double t, double x) const {
  switch (shape_) {
    case Shape::Constant: return a_;
    case Shape::TimeQuadratic: return a_ + b_ * t * t;
    case Shape::Bump: return 1.0 + a_ * std::exp(-(t * t + x * x) / (b_ * b_));
  }
  return 1.0;
}

std::string ConformalFactor::name() const {
  switch (shape_) {
    case Shape::Constant: return "constant";
    case Shape::TimeQuadratic: return "time_quadratic";
    case Shape::Bump: return "bump";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Spacetime

Spacetime Spacetime::minkowski(int dim) {
  if (dim < 2 || dim > 4) {
    throw Error(ErrorKind::PreconditionViolated, "Minkowski dimension must be 2, 3 or 4");
  }
  return {Kind::Minkowski, dim, 0.0, ConformalFactor::constant(1.0)};
}

Spacetime Spacetime::flat_cylinder(double circumference) {
  if (!(circumference > 0.0) || !std::isfinite(circumference)) {
    throw Error(ErrorKind::PreconditionViolated, "cylinder circumference must be positive");
  }
  return {Kind::FlatCylinder, 2, circumference, ConformalFactor::constant(1.0)};
}

Spacetime Spacetime::conformally_flat(ConformalFactor factor) {
  return {Kind::ConformallyFlat, 2, 0.0, factor};
}

Spacetime Spacetime::with_null_tolerance(double tol) const {
  if (!(tol >= 0.0)) throw Error(ErrorKind::PreconditionViolated, "tol_null must be >= 0");
  Spacetime copy = *this;
  copy.tol_null_ = tol;
  return copy;
}

double wrap_angle(double delta, double circumference) {
  double r = std::fmod(delta + 0.5 * circumference, circumference);
  if (r < 0.0) r += circumference;
  r -= 0.5 * circumference;
  // fmod can land exactly on +C/2 after the shift back.
  if (r >= 0.5 * circumference) r -= circumference;
  return r;
}

Point Spacetime::point(const Vector& coords) const {
  if (coords.size() != dim_) {
    std::ostringstream msg;
    msg << "expected " << dim_ << " coordinates, got " << coords.size();
    throw Error(ErrorKind::InvalidPoint, msg.str());
  }
  if (!coords.allFinite()) throw Error(ErrorKind::InvalidPoint, "non-finite coordinate");
  Point p{coords};
  if (periodic()) {
    double th = std::fmod(p.coords[1], circumference_);
    if (th < 0.0) th += circumference_;
    if (th >= circumference_) th = 0.0;
    p.coords[1] = th;
  }
  return p;
}

Point Spacetime::point(std::initializer_list<double> coords) const {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  return point(v);
}

Vector Spacetime::displacement(const Point& from, const Point& to) const {
  Vector d = to.coords - from.coords;
  if (periodic()) d[1] = wrap_angle(d[1], circumference_);
  return d;
}

double Spacetime::spatial_separation(const Point& from, const Point& to) const {
  Vector d = displacement(from, to);
  return d.tail(dim_ - 1).norm();
}

double Spacetime::conformal_weight(const Point& x) const {
  if (kind_ != Kind::ConformallyFlat) return 1.0;
  return factor_(x.coords[0], x.coords[1]);
}

std::string Spacetime::name() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Minkowski: out << "minkowski(" << dim_ << ")"; break;
    case Kind::FlatCylinder: out << "flat_cylinder(" << circumference_ << ")"; break;
    case Kind::ConformallyFlat: out << "conformally_flat(" << factor_.name() << ")"; break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Metric operations

namespace {

void require_in_chart(const Spacetime& s, const Point& x) {
  if (x.dim() != s.dim()) throw Error(ErrorKind::InvalidPoint, "point dimension mismatch");
  if (!x.coords.allFinite()) throw Error(ErrorKind::InvalidPoint, "non-finite coordinate");
}

void require_base(const Point& x, const TangentVector& v) {
  if (v.base.dim() != x.dim() || v.base.coords != x.coords) {
    throw Error(ErrorKind::MismatchedBase, "tangent vector is not based at the evaluation point");
  }
  if (v.components.size() != x.dim()) {
    throw Error(ErrorKind::InvalidPoint, "tangent vector dimension mismatch");
  }
}

}  // namespace

Matrix metric_components(const Spacetime& s, const Point& x) {
  require_in_chart(s, x);
  const int n = s.dim();
  Matrix g = Matrix::Identity(n, n);
  g(0, 0) = -1.0;
  const double omega = s.conformal_weight(x);
  if (omega != 1.0) g *= omega * omega;
  return g;
}

double inner_components(const Spacetime& s, const Point& x, const Vector& v, const Vector& w) {
  const double omega = s.conformal_weight(x);
  double acc = -v[0] * w[0];
  for (Eigen::Index i = 1; i < v.size(); ++i) acc += v[i] * w[i];
  return omega * omega * acc;
}

double inner(const Spacetime& s, const Point& x, const TangentVector& v, const TangentVector& w) {
  require_in_chart(s, x);
  require_base(x, v);
  require_base(x, w);
  return inner_components(s, x, v.components, w.components);
}

CausalCharacter classify_components(double norm2, double time_component, bool zero, double tol_null) {
  if (zero) return {CausalClass::Zero, TimeOrientation::None};
  CausalClass kind;
  if (norm2 < -tol_null) {
    kind = CausalClass::Timelike;
  } else if (norm2 <= tol_null) {
    kind = CausalClass::Null;
  } else {
    return {CausalClass::Spacelike, TimeOrientation::None};
  }
  TimeOrientation o = TimeOrientation::None;
  if (time_component > 0.0) o = TimeOrientation::Future;
  if (time_component < 0.0) o = TimeOrientation::Past;
  // A "null within tolerance" vector with vanishing time part is spacelike in
  // every catalog chart; report it without an orientation.
  if (o == TimeOrientation::None) return {CausalClass::Spacelike, TimeOrientation::None};
  return {kind, o};
}

CausalCharacter causal_character(const Spacetime& s, const Point& x, const TangentVector& v) {
  require_in_chart(s, x);
  require_base(x, v);
  const bool zero = (v.components.array() == 0.0).all();
  return classify_components(inner_components(s, x, v.components, v.components), v.components[0],
                             zero, s.null_tolerance());
}

TangentVector raise_gradient(const Spacetime& s, const Point& x, const Covector& df) {
  require_in_chart(s, x);
  if (df.size() != s.dim()) throw Error(ErrorKind::InvalidPoint, "covector dimension mismatch");
  const double omega = s.conformal_weight(x);
  Vector v = df / (omega * omega);
  v[0] = -v[0];
  return {x, v};
}

}  // namespace lorentz
