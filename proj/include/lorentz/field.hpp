#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "lorentz/geometry.hpp"

namespace lorentz {

enum class GradientMode { Analytic, CentralDifference };

/// A real function on a spacetime chart together with a rule for its
/// differential. Fields are cheap to copy; the rules are shared.
///
/// The seam distance is the chart distance to the field's declared
/// non-differentiability set (null cones, cut loci, region boundaries), or
/// +inf when the field is smooth everywhere.
class ScalarField {
 public:
  using Evaluator = std::function<double(const Point&)>;
  using Differential = std::function<std::optional<Covector>(const Point&)>;
  using SeamDistance = std::function<double(const Point&)>;

  ScalarField(std::string description, Evaluator value, Differential differential,
              SeamDistance seam_distance = {}, std::optional<double> lipschitz = std::nullopt);

  double operator()(const Point& x) const { return rules_->value(x); }

  /// df at x under the active gradient mode; nullopt at declared undefined points.
  std::optional<Covector> differential(const Spacetime& s, const Point& x) const;

  /// Differential from the analytic rule regardless of mode.
  std::optional<Covector> analytic_differential(const Point& x) const { return rules_->differential(x); }

  double seam_distance(const Point& x) const;

  GradientMode mode() const { return mode_; }
  double step() const { return step_; }
  ScalarField with_central_difference(double h) const;
  ScalarField with_analytic_gradient() const;

  const std::string& description() const { return rules_->description; }
  std::optional<double> lipschitz() const { return rules_->lipschitz; }

  ScalarField scaled(double factor) const;
  ScalarField renamed(std::string description) const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);

 private:
  struct Rules {
    std::string description;
    Evaluator value;
    Differential differential;
    SeamDistance seam_distance;
    std::optional<double> lipschitz;
  };

  std::shared_ptr<const Rules> rules_;
  GradientMode mode_ = GradientMode::Analytic;
  double step_ = 0.0;
};

/// f = a t + b. Smooth, with Lipschitz constant |a|.
ScalarField affine_time_field(int dim, double a, double b = 0.0);

inline constexpr double kNoSeam = std::numeric_limits<double>::infinity();

}  // namespace lorentz
