#include "lorentz/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lorentz/causal.hpp"
#include "lorentz/distance.hpp"
#include "lorentz/error.hpp"
#include "lorentz/parallel.hpp"

namespace lorentz {

GridSpec GridSpec::refined() const {
  GridSpec out = *this;
  for (int& r : out.resolution) r = 2 * r - 1;
  return out;
}

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int r : resolution) n *= static_cast<std::size_t>(r);
  return n;
}

double eikonal_value(const Spacetime& s, const ScalarField& f, const Point& x, double exclusion_radius) {
  const double seam = f.seam_distance(x);
  if (seam < exclusion_radius || seam == 0.0) {
    throw Error(ErrorKind::UndefinedPoint, "point lies in the excluded neighbourhood of a seam");
  }
  auto df = f.differential(s, x);
  if (!df) throw Error(ErrorKind::UndefinedPoint, "gradient undefined at point");
  const TangentVector v = raise_gradient(s, x, *df);
  return inner_components(s, x, v.components, v.components);
}

std::vector<GridSample> sample_grid(const Spacetime& s, const ScalarField& f, const GridSpec& grid) {
  const int dim = s.dim();
  if (static_cast<int>(grid.box.size()) != dim || static_cast<int>(grid.resolution.size()) != dim) {
    throw Error(ErrorKind::PreconditionViolated, "grid box and resolution must have one entry per axis");
  }
  for (int i = 0; i < dim; ++i) {
    if (grid.resolution[i] < 2) throw Error(ErrorKind::PreconditionViolated, "grid resolution must be >= 2");
    if (!(grid.box[i].second > grid.box[i].first)) throw Error(ErrorKind::PreconditionViolated, "empty grid box");
  }

  std::vector<GridSample> samples(grid.size());
  detail::parallel_for(samples.size(), [&](std::size_t flat) {
    Vector coords(dim);
    std::size_t rem = flat;
    for (int i = dim - 1; i >= 0; --i) {
      const int r = grid.resolution[i];
      const int idx = static_cast<int>(rem % r);
      rem /= r;
      const auto [lo, hi] = grid.box[i];
      coords[i] = lo + (hi - lo) * static_cast<double>(idx) / (r - 1);
    }
    GridSample& out = samples[flat];
    out.point = s.point(coords);
    out.value = f(out.point);
    out.eikonal = std::numeric_limits<double>::quiet_NaN();
    if (grid.exclusion_radius > 0.0 && f.seam_distance(out.point) < grid.exclusion_radius) {
      out.excluded = true;
      return;
    }
    auto df = f.differential(s, out.point);
    if (!df) {
      out.excluded = true;
      return;
    }
    const TangentVector v = raise_gradient(s, out.point, *df);
    out.eikonal = inner_components(s, out.point, v.components, v.components);
    const bool zero = (v.components.array() == 0.0).all();
    out.gradient = classify_components(out.eikonal, v.components[0], zero, s.null_tolerance());
  });
  return samples;
}

namespace {

bool orientation_good(const CausalCharacter& c) {
  return c.kind == CausalClass::Timelike && c.orientation == TimeOrientation::Past;
}

}  // namespace

AdmissibilityReport summarize_admissibility(const std::vector<GridSample>& samples, double tolerance,
                                            double trim_fraction) {
  AdmissibilityReport report;
  report.tolerance = tolerance;
  report.trim_fraction = trim_fraction;
  report.total_samples = samples.size();

  struct Ranked {
    bool bad_orientation;
    double eikonal;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(samples.size());
  std::size_t violations = 0;
  for (const GridSample& g : samples) {
    if (g.excluded) {
      ++report.excluded_samples;
      continue;
    }
    const bool bad = !orientation_good(g.gradient);
    ranked.push_back({bad, g.eikonal});
    if (bad || g.eikonal > -1.0 + tolerance) ++violations;
  }
  const std::size_t n = ranked.size();
  if (n == 0) {
    report.verdict = false;
    report.orientation_ok = false;
    report.ess_sup_estimate = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  // Worst first: orientation failures, then larger eikonal values.
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.bad_orientation != b.bad_orientation) return a.bad_orientation;
    return a.eikonal > b.eikonal;
  });
  const auto trimmed = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(n)));
  report.trimmed_samples = std::min(trimmed, n - 1);
  report.kept_samples = n - report.trimmed_samples;
  report.orientation_ok = true;
  report.ess_sup_estimate = -std::numeric_limits<double>::infinity();
  for (std::size_t i = report.trimmed_samples; i < n; ++i) {
    if (ranked[i].bad_orientation) report.orientation_ok = false;
    report.ess_sup_estimate = std::max(report.ess_sup_estimate, ranked[i].eikonal);
  }
  report.violation_fraction = static_cast<double>(violations) / static_cast<double>(n);
  report.verdict = report.ess_sup_estimate <= -1.0 + tolerance && report.orientation_ok &&
                   report.violation_fraction <= trim_fraction;
  return report;
}

AdmissibilityReport check_admissible(const Spacetime& s, const ScalarField& f, const GridSpec& grid,
                                     const EikonalTolerances& tol) {
  return summarize_admissibility(sample_grid(s, f, grid), tol.for_mode(f.mode()), tol.trim_fraction);
}

void write_grid_csv(std::ostream& out, const std::vector<GridSample>& samples) {
  static constexpr const char* kAxes[] = {"t", "x", "y", "z"};
  const int dim = samples.empty() ? 2 : samples.front().point.dim();
  for (int i = 0; i < dim; ++i) out << kAxes[i] << ',';
  out << "f,eikonal_value,orientation_ok\n";
  const auto old_precision = out.precision(17);
  for (const GridSample& g : samples) {
    for (int i = 0; i < dim; ++i) out << g.point[i] << ',';
    out << g.value << ',';
    if (g.excluded) {
      out << ",\n";
    } else {
      out << g.eikonal << ',' << (orientation_good(g.gradient) ? 1 : 0) << '\n';
    }
  }
  out.precision(old_precision);
}

double inverse_cauchy_schwarz_slack(const Spacetime& s, const Point& x, const TangentVector& v,
                                    const TangentVector& w) {
  if (causal_character(s, x, v).kind != CausalClass::Timelike ||
      causal_character(s, x, w).kind != CausalClass::Timelike) {
    throw Error(ErrorKind::NonTimelikeInput, "inverse Cauchy-Schwarz needs two timelike vectors");
  }
  const double gvw = inner(s, x, v, w);
  const double gvv = inner(s, x, v, v);
  const double gww = inner(s, x, w, w);
  return std::abs(gvw) - std::sqrt(-gvv) * std::sqrt(-gww);
}

double inverse_triangle_slack(const Spacetime& s, const Point& p, const Point& q, const Point& r) {
  auto step_ok = [&](const Point& a, const Point& b) {
    const CausalRelation rel = classify_pair(s, a, b);
    return rel == CausalRelation::Equal || is_future_type(rel);
  };
  if (!step_ok(p, q) || !step_ok(q, r)) {
    throw Error(ErrorKind::ChainNotCausal, "points do not form a causal chain p <= q <= r");
  }
  return exact_distance(s, p, r) - exact_distance(s, p, q) - exact_distance(s, q, r);
}

double lower_bound_slack(const Spacetime& s, const ScalarField& f, const Point& p, const Point& q) {
  if (!is_future_type(classify_pair(s, p, q))) {
    throw Error(ErrorKind::PairNotCausal, "lower bound needs q in the causal future of p");
  }
  return (f(q) - f(p)) - exact_distance(s, p, q);
}

}  // namespace lorentz
