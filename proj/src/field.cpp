#include "lorentz/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lorentz/error.hpp"

namespace lorentz {

ScalarField::ScalarField(std::string description, Evaluator value, Differential differential,
                         SeamDistance seam_distance, std::optional<double> lipschitz)
    : rules_(std::make_shared<const Rules>(Rules{std::move(description), std::move(value),
                                                 std::move(differential), std::move(seam_distance),
                                                 lipschitz})) {}

std::optional<Covector> ScalarField::differential(const Spacetime& s, const Point& x) const {
  if (mode_ == GradientMode::Analytic) return rules_->differential(x);
  Covector df(x.dim());
  for (int i = 0; i < x.dim(); ++i) {
    Vector plus = x.coords;
    Vector minus = x.coords;
    plus[i] += step_;
    minus[i] -= step_;
    df[i] = (rules_->value(s.point(plus)) - rules_->value(s.point(minus))) / (2.0 * step_);
  }
  return df;
}

double ScalarField::seam_distance(const Point& x) const {
  return rules_->seam_distance ? rules_->seam_distance(x) : kNoSeam;
}

ScalarField ScalarField::with_central_difference(double h) const {
  if (!(h > 0.0)) throw Error(ErrorKind::PreconditionViolated, "central difference step must be positive");
  ScalarField copy = *this;
  copy.mode_ = GradientMode::CentralDifference;
  copy.step_ = h;
  return copy;
}

ScalarField ScalarField::with_analytic_gradient() const {
  ScalarField copy = *this;
  copy.mode_ = GradientMode::Analytic;
  copy.step_ = 0.0;
  return copy;
}

ScalarField ScalarField::scaled(double factor) const {
  auto base = rules_;
  std::ostringstream name;
  name << factor << "*(" << base->description << ")";
  std::optional<double> lip;
  if (base->lipschitz) lip = std::abs(factor) * *base->lipschitz;
  ScalarField out(
      name.str(), [base, factor](const Point& x) { return factor * base->value(x); },
      [base, factor](const Point& x) -> std::optional<Covector> {
        auto df = base->differential(x);
        if (!df) return std::nullopt;
        return Covector(factor * *df);
      },
      base->seam_distance, lip);
  out.mode_ = mode_;
  out.step_ = step_;
  return out;
}

ScalarField ScalarField::renamed(std::string description) const {
  ScalarField out(std::move(description), rules_->value, rules_->differential, rules_->seam_distance,
                  rules_->lipschitz);
  out.mode_ = mode_;
  out.step_ = step_;
  return out;
}

namespace {

ScalarField combine(const ScalarField& a, const ScalarField& b, double sign, const char* op) {
  std::optional<double> lip;
  if (a.lipschitz() && b.lipschitz()) lip = *a.lipschitz() + *b.lipschitz();
  return ScalarField(
      "(" + a.description() + ")" + op + "(" + b.description() + ")",
      [a, b, sign](const Point& x) { return a(x) + sign * b(x); },
      [a, b, sign](const Point& x) -> std::optional<Covector> {
        auto da = a.analytic_differential(x);
        if (!da) return std::nullopt;
        auto db = b.analytic_differential(x);
        if (!db) return std::nullopt;
        return Covector(*da + sign * *db);
      },
      [a, b](const Point& x) { return std::min(a.seam_distance(x), b.seam_distance(x)); }, lip);
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return combine(a, b, 1.0, "+"); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return combine(a, b, -1.0, "-"); }

ScalarField affine_time_field(int dim, double a, double b) {
  std::ostringstream name;
  name << a << "*t";
  if (b != 0.0) name << (b > 0 ? "+" : "") << b;
  return ScalarField(
      name.str(), [a, b](const Point& x) { return a * x.t() + b; },
      [a, dim](const Point&) -> std::optional<Covector> {
        Covector df = Covector::Zero(dim);
        df[0] = a;
        return df;
      },
      {}, std::abs(a));
}

}  // namespace lorentz
