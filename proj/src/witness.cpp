#include "lorentz/witness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "lorentz/distance.hpp"
#include "lorentz/error.hpp"

namespace lorentz {

std::string to_string(CoverSide side) { return side == CoverSide::Above ? "above" : "below"; }

std::string to_string(WitnessCase c) {
  switch (c) {
    case WitnessCase::Equality: return "equality";
    case WitnessCase::Reverse: return "reverse";
    case WitnessCase::Unrelated: return "unrelated";
  }
  return "?";
}

namespace {

void require_covering_support(const Spacetime& s) {
  const bool ok = s.kind() == Spacetime::Kind::FlatCylinder ||
                  (s.kind() == Spacetime::Kind::Minkowski && s.dim() == 2);
  if (!ok) throw Error(ErrorKind::Unsupported, "witness constructions need FlatCylinder or Minkowski(2), got " + s.name());
}

double sign_of(CoverSide side) { return side == CoverSide::Above ? 1.0 : -1.0; }

// Generators all share one time level, so the ones that can contribute at z
// form a window of spatial positions; `positions` is sorted.
class GeneratorSum {
 public:
  GeneratorSum(Spacetime s, std::vector<Point> generators, double level, CoverSide side)
      : s_(std::move(s)), generators_(std::move(generators)), level_(level), side_(side) {
    positions_.reserve(generators_.size());
    for (const Point& g : generators_) positions_.push_back(g[1]);
  }

  // Time from the generator line to z, oriented so positive means "inside".
  double lead(const Point& z) const { return sign_of(side_) * (z.t() - level_); }

  template <class Fn>
  void for_each_candidate(const Point& z, Fn&& fn) const {
    const double a = lead(z);
    if (a < -s_.null_tolerance()) return;
    const double w = std::max(a, 0.0) + 1e-9;
    const double x = z[1];
    auto visit = [&](double lo, double hi) {
      auto first = std::lower_bound(positions_.begin(), positions_.end(), lo);
      auto last = std::upper_bound(positions_.begin(), positions_.end(), hi);
      for (auto it = first; it < last; ++it) fn(generators_[static_cast<std::size_t>(it - positions_.begin())]);
    };
    if (!s_.periodic()) {
      visit(x - w, x + w);
      return;
    }
    const double c = s_.circumference();
    if (2.0 * w >= c) {
      for (const Point& g : generators_) fn(g);
      return;
    }
    double lo = x - w;
    double hi = x + w;
    if (lo < 0.0) {
      visit(lo + c, c);
      visit(0.0, hi);
    } else if (hi >= c) {
      visit(lo, c);
      visit(0.0, hi - c);
    } else {
      visit(lo, hi);
    }
  }

  double value(const Point& z) const {
    double acc = 0.0;
    for_each_candidate(z, [&](const Point& g) { acc += distance(g, z); });
    return acc;
  }

  std::optional<Covector> differential(const Point& z) const {
    Covector df = Covector::Zero(s_.dim());
    bool undefined = false;
    const DistanceDirection dir =
        side_ == CoverSide::Above ? DistanceDirection::FromBase : DistanceDirection::ToBase;
    for_each_candidate(z, [&](const Point& g) {
      if (undefined) return;
      auto dg = distance_gradient(s_, g, z, dir);
      if (!dg) {
        undefined = true;
        return;
      }
      df += *dg;
    });
    if (undefined) return std::nullopt;
    return df;
  }

  double seam_distance(const Point& z) const {
    std::optional<double> circ;
    if (s_.periodic()) circ = s_.circumference();
    double best = kNoSeam;
    for (const Point& g : generators_) {
      const double a = sign_of(side_) * (z.t() - g.t());
      best = std::min(best, distance_seam_gap(a, s_.spatial_separation(g, z), circ));
    }
    return best;
  }

  int contributing(const Point& z) const {
    int n = 0;
    for_each_candidate(z, [&](const Point& g) { n += distance(g, z) > 0.0 ? 1 : 0; });
    return n;
  }

 private:
  double distance(const Point& g, const Point& z) const {
    return side_ == CoverSide::Above ? exact_distance(s_, g, z) : exact_distance(s_, z, g);
  }

  Spacetime s_;
  std::vector<Point> generators_;
  std::vector<double> positions_;
  double level_;
  CoverSide side_;
};

struct Arc {
  double lo;
  double hi;
  bool lo_open;
  bool hi_open;
};

// Complement of closed forbidden intervals in the generator line. On the
// circle the result is a list of open arcs (one representative each); on a
// segment the outer ends are closed.
std::vector<Arc> allowed_arcs(const SurfaceDomain& line, std::vector<ClosedInterval> forbidden) {
  std::vector<Arc> arcs;
  if (line.periodic) {
    const double c = line.circumference;
    for (const auto& f : forbidden) {
      if (f.hi - f.lo >= c) return arcs;
    }
    std::vector<ClosedInterval> unrolled;
    for (const auto& f : forbidden) {
      for (int k = -1; k <= 2; ++k) unrolled.push_back({f.lo + k * c, f.hi + k * c});
    }
    std::sort(unrolled.begin(), unrolled.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
    std::vector<ClosedInterval> merged;
    for (const auto& f : unrolled) {
      if (!merged.empty() && f.lo <= merged.back().hi) {
        merged.back().hi = std::max(merged.back().hi, f.hi);
      } else {
        merged.push_back(f);
      }
    }
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
      const double start = merged[i].hi;
      if (start >= 0.0 && start < c) arcs.push_back({start, merged[i + 1].lo, true, true});
    }
    return arcs;
  }
  std::sort(forbidden.begin(), forbidden.end(), [](auto& a, auto& b) { return a.lo < b.lo; });
  double cur = line.lo;
  bool cur_open = false;
  for (const auto& f : forbidden) {
    if (f.hi < cur) continue;
    if (f.lo > cur) arcs.push_back({cur, std::min(f.lo, line.hi), cur_open, f.lo <= line.hi});
    cur = std::max(cur, f.hi);
    cur_open = true;
    if (cur > line.hi) break;
  }
  if (cur < line.hi || (cur == line.hi && !cur_open)) arcs.push_back({cur, line.hi, cur_open, false});
  return arcs;
}

std::vector<double> place_on_arcs(const std::vector<Arc>& arcs, double step, double eta, double period) {
  std::vector<double> xs;
  for (const Arc& arc : arcs) {
    const double start = arc.lo + (arc.lo_open ? eta : 0.0);
    const double end = arc.hi - (arc.hi_open ? eta : 0.0);
    if (start > end) continue;
    double x = start;
    double last = start;
    xs.push_back(x);
    while ((x += step) < end) {
      xs.push_back(x);
      last = x;
    }
    if (end - last > 1e-12 * std::max(1.0, std::abs(end))) xs.push_back(end);
  }
  if (period > 0.0) {
    for (double& x : xs) {
      x = std::fmod(x, period);
      if (x < 0.0) x += period;
    }
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

CoveringWitness build_covering_witness(const Spacetime& s, const CauchySurface& S, CoverSide side,
                                       std::vector<Point> excluded, std::vector<Point> guards,
                                       const CoveringOptions& options) {
  require_covering_support(s);
  if (excluded.empty() || excluded.size() > 2 || guards.size() != excluded.size()) {
    throw Error(ErrorKind::PreconditionViolated, "covering witness takes one or two excluded/guard pairs");
  }
  if (!(options.depth > 0.0) || !(options.r_max > 0.0) || !(options.overlap >= 0.0 && options.overlap < 1.0)) {
    throw Error(ErrorKind::PreconditionViolated, "depth, r_max must be positive and overlap in [0,1)");
  }
  const double sigma = sign_of(side);
  const double tau = S.level;

  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < excluded.size(); ++i) {
    if (sigma * (excluded[i].t() - tau) < 0.0) {
      throw Error(ErrorKind::PreconditionViolated, "excluded point on the wrong side of the surface");
    }
    const double margin = sigma * (guards[i].t() - excluded[i].t()) - s.spatial_separation(excluded[i], guards[i]);
    if (!(margin > s.null_tolerance())) {
      throw Error(ErrorKind::PreconditionViolated, "guard must be chronologically beyond its excluded point");
    }
    min_margin = std::min(min_margin, margin);
  }

  SurfaceDomain surface_domain;
  if (s.periodic()) {
    surface_domain = SurfaceDomain::circle(s.circumference());
  } else {
    if (!options.extent || !(options.extent->second > options.extent->first)) {
      throw Error(ErrorKind::PreconditionViolated, "Minkowski coverings need a finite surface extent");
    }
    surface_domain = SurfaceDomain::segment(options.extent->first, options.extent->second);
  }

  std::vector<SurfaceTrace> holes;
  for (const Point& g : guards) holes.push_back(chronological_trace(s, g, S));

  CoverCertificate last_failure;
  for (double depth = options.depth; depth >= options.min_depth; depth *= 0.5) {
    const double diameter = s.periodic() ? std::min(2.0 * depth, s.circumference()) : 2.0 * depth;
    if (!(diameter < options.r_max)) continue;
    const double level = tau - sigma * depth;
    const double step = depth * (1.0 - options.overlap);
    const double eta = std::min(0.01 * depth, 0.25 * min_margin);

    SurfaceDomain line = surface_domain;
    if (!s.periodic()) line = SurfaceDomain::segment(surface_domain.lo - 0.5 * depth, surface_domain.hi + 0.5 * depth);
    std::vector<ClosedInterval> forbidden;
    for (const Point& q : excluded) {
      const double radius = sigma * (q.t() - level);
      forbidden.push_back({q[1] - radius, q[1] + radius});
    }
    const std::vector<Arc> arcs = allowed_arcs(line, forbidden);
    const std::vector<double> xs = place_on_arcs(arcs, step, eta, s.periodic() ? s.circumference() : 0.0);

    std::vector<Point> generators;
    std::vector<SurfaceTrace> traces;
    for (double x : xs) {
      generators.push_back(s.point({level, x}));
      traces.push_back(chronological_trace(s, generators.back(), S));
    }
    CoverCertificate cert = certify_cover(surface_domain, traces, holes);
    if (!cert.covered) {
      last_failure = cert;
      continue;
    }

    CoveringWitness w;
    w.surface = S;
    w.side = side;
    w.excluded = excluded;
    w.guards = guards;
    w.generators = generators;
    w.depth = depth;
    w.step = step;
    w.r_max = options.r_max;
    w.domain = surface_domain;
    w.certificate = std::move(cert);
    w.allowed_arcs = arcs.size();

    auto sum = std::make_shared<const GeneratorSum>(s, generators, level, side);
    std::ostringstream name;
    name << "covering[" << to_string(side) << ", tau=" << tau << ", " << generators.size() << " generators]";
    w.field_ = ScalarField(
        name.str(), [sum](const Point& z) { return sum->value(z); },
        [sum](const Point& z) { return sum->differential(z); },
        [sum](const Point& z) { return sum->seam_distance(z); });
    return w;
  }

  std::ostringstream msg;
  msg << "generator traces cannot cover the surface outside the guards' cones down to depth "
      << options.min_depth;
  if (last_failure.uncovered_point) msg << " (first uncovered surface point x=" << *last_failure.uncovered_point << ")";
  throw Error(ErrorKind::CoverageImpossible, msg.str());
}

int CoveringWitness::contributing_generators(const Spacetime& s, const Point& z) const {
  const double level = generators.empty() ? surface.level : generators.front().t();
  return GeneratorSum(s, generators, level, side).contributing(z);
}

int CoveringWitness::contribution_bound(const Spacetime& s, const Point& z) const {
  if (generators.empty()) return 0;
  const double lead = sign_of(side) * (z.t() - generators.front().t());
  if (lead <= 0.0) return 0;
  const double width = 2.0 * lead;
  if (s.periodic() && width >= s.circumference()) return static_cast<int>(generators.size());
  const auto per_arc = static_cast<long>(std::floor(width / step)) + 2;
  return static_cast<int>(std::min<long>(per_arc * static_cast<long>(allowed_arcs), static_cast<long>(generators.size())));
}

CoveringChecklist CoveringWitness::verify(const Spacetime& s, int samples, std::uint64_t seed, double height) const {
  CoveringChecklist out;
  const double sigma = sign_of(side);
  const double tau = surface.level;

  out.generators_strictly_off_surface = std::all_of(generators.begin(), generators.end(), [&](const Point& g) {
    return sigma * (tau - g.t()) > 0.0;
  });
  out.generators_outside_excluded = std::all_of(generators.begin(), generators.end(), [&](const Point& g) {
    return std::none_of(excluded.begin(), excluded.end(), [&](const Point& q) {
      return side == CoverSide::Above ? in_causal_past(s, g, q) : in_causal_future(s, g, q);
    });
  });
  out.diameters_below_r_max = std::all_of(generators.begin(), generators.end(), [&](const Point& g) {
    // Time reflection through S maps the past trace of a Below generator onto
    // the future trace of its mirror image.
    Vector mirrored = g.coords;
    mirrored[0] = tau - std::abs(tau - g.t());
    return cone_trace_diameter(s, s.point(mirrored), surface) < r_max;
  });
  out.coverage_certified = certificate.covered;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ScalarField& f = field();

  out.zero_on_excluded = true;
  for (int k = 0; k < samples; ++k) {
    const Point& q = excluded[static_cast<std::size_t>(k) % excluded.size()];
    const double dt = height * unit(rng);
    const double dx = dt * (2.0 * unit(rng) - 1.0);
    const Point z = s.point({q.t() - sigma * dt, q[1] + dx});
    ++out.zero_samples;
    if (f(z) != 0.0) out.zero_on_excluded = false;
  }

  out.positive_on_future = true;
  const double x_lo = domain.periodic ? 0.0 : domain.lo;
  const double x_hi = domain.periodic ? domain.circumference : domain.hi;
  for (int attempts = 0; out.positive_samples < samples && attempts < 100 * samples; ++attempts) {
    const Point z = s.point({tau + sigma * height * unit(rng), x_lo + (x_hi - x_lo) * unit(rng)});
    const bool shadowed = std::any_of(guards.begin(), guards.end(), [&](const Point& g) {
      return side == CoverSide::Above ? in_chronological_past(s, z, g) : in_chronological_future(s, z, g);
    });
    if (shadowed) continue;
    ++out.positive_samples;
    if (!(f(z) > 0.0)) out.positive_on_future = false;
  }
  if (out.positive_samples < samples) out.positive_on_future = false;
  return out;
}

// ---------------------------------------------------------------------------
// Case witnesses

GridSpec verification_box(const Spacetime& s, const Point& p, const Point& q, int resolution, double margin) {
  GridSpec grid;
  grid.box.push_back({std::min(p.t(), q.t()) - margin, std::max(p.t(), q.t()) + margin});
  if (s.periodic()) {
    grid.box.push_back({0.0, s.circumference()});
  } else {
    for (int i = 1; i < s.dim(); ++i) grid.box.push_back({std::min(p[i], q[i]) - margin, std::max(p[i], q[i]) + margin});
  }
  grid.resolution.assign(grid.box.size(), resolution);
  return grid;
}

namespace {

CoveringOptions covering_options_for(const Spacetime& s, const GridSpec& box, const WitnessOptions& options) {
  CoveringOptions cov = options.covering;
  if (!s.periodic() && !cov.extent) {
    // Wide enough that the segment's domain of dependence holds the whole box.
    const double pad = (box.box[0].second - box.box[0].first) + options.verification_margin;
    cov.extent = std::make_pair(box.box[1].first - pad, box.box[1].second + pad);
  }
  return cov;
}

Point offset(const Spacetime& s, const Point& x, const Vector& delta) { return s.point(Vector(x.coords + delta)); }

Vector time_step(int dim, double dt) {
  Vector v = Vector::Zero(dim);
  v[0] = dt;
  return v;
}

void finish_values(WitnessField& w) {
  w.f_p = w.field()(w.p);
  w.f_q = w.field()(w.q);
  w.value_difference = w.f_q - w.f_p;
}

}  // namespace

WitnessField build_equality_witness(const Spacetime& s, const Point& p, const Point& q, double epsilon,
                                    const WitnessOptions& options) {
  require_covering_support(s);
  const CausalRelation rel = classify_pair(s, p, q);
  if (!is_future_type(rel)) throw Error(ErrorKind::PairNotFuture, "equality witness needs p < q, got " + to_string(rel));
  if (!(epsilon > 0.0)) throw Error(ErrorKind::PreconditionViolated, "epsilon must be positive");

  WitnessField w;
  w.kind = WitnessCase::Equality;
  w.p = p;
  w.q = q;
  w.epsilon = epsilon;
  const double d = exact_distance(s, p, q);
  const CauchySurface S{q.t()};

  // Slide p' back along the maximizing geodesic through p and q when there is
  // one (alpha vanishes there); along d/dt for null separated pairs.
  Vector dir = time_step(s.dim(), 1.0);
  if (rel == CausalRelation::ChronologicalFuture) {
    const Vector disp = s.displacement(p, q);
    dir = disp / disp[0];
  }
  std::optional<Point> p_prime;
  for (double o = options.initial_offset; o >= options.min_offset; o *= 0.5) {
    w.offsets_tried.push_back(o);
    const Point candidate = offset(s, p, -o * dir);
    const double alpha = (exact_distance(s, candidate, q) - exact_distance(s, candidate, p)) - d;
    if (in_chronological_past(s, candidate, p) && std::abs(alpha) < epsilon) {
      p_prime = candidate;
      break;
    }
  }
  if (!p_prime) throw Error(ErrorKind::PreconditionViolated, "offset schedule exhausted choosing p'");

  w.verification_box = verification_box(s, p, q, options.verification_resolution, options.verification_margin);
  const ScalarField anchor = distance_field(s, *p_prime, DistanceDirection::FromBase);

  // On the cylinder the cone of p' wraps the whole circle after half a
  // circumference, and then S minus that trace is no longer a Cauchy surface
  // for the complement of I+(p'). Put the lower surface exactly where the
  // wrap happens: everything above it is in I+(p') up to a null set, so
  // d_{p'} alone carries the upper region and f1 is not needed.
  if (s.periodic() && q.t() - p_prime->t() >= 0.5 * s.circumference()) {
    const double lead = p.t() - p_prime->t();
    CoveringOptions cov = options.covering;
    cov.depth = std::min(cov.depth, 0.5 * lead);
    cov.min_depth = std::min(cov.min_depth, 1e-3 * lead);
    const CauchySurface wrap{p_prime->t() + 0.5 * s.circumference()};
    w.lower = build_covering_witness(s, wrap, CoverSide::Below, {p}, {*p_prime}, cov);
    w.auxiliary = {{"p_prime", *p_prime}};
    w.field_ = (anchor - w.lower->field()).renamed("equality witness d(p',.) - f2 (wrapped)");
    finish_values(w);
    return w;
  }

  // q' close enough to q that I^-(q') cap J^+(S) stays inside I^+(p').
  const SurfaceTrace p_trace = chronological_trace(s, *p_prime, S);
  std::optional<Point> q_prime;
  for (double o = options.initial_offset; o >= options.min_offset; o *= 0.5) {
    const Point candidate = offset(s, q, time_step(s.dim(), o));
    if (trace_contains(s, p_trace, chronological_trace(s, candidate, S))) {
      q_prime = candidate;
      break;
    }
  }
  if (!q_prime) throw Error(ErrorKind::PreconditionViolated, "offset schedule exhausted choosing q'");

  const CoveringOptions cov = covering_options_for(s, w.verification_box, options);
  w.upper = build_covering_witness(s, S, CoverSide::Above, {q}, {*q_prime}, cov);
  w.lower = build_covering_witness(s, S, CoverSide::Below, {p}, {*p_prime}, cov);
  w.auxiliary = {{"p_prime", *p_prime}, {"q_prime", *q_prime}};

  w.field_ = (w.upper->field() - w.lower->field() + anchor).renamed("equality witness f1 - f2 + d(p',.)");
  finish_values(w);
  return w;
}

WitnessField build_reverse_witness(const Spacetime& s, const Point& p, const Point& q, const WitnessOptions& options) {
  const CausalRelation rel = classify_pair(s, p, q);
  if (!is_past_type(rel)) throw Error(ErrorKind::PairNotPast, "reverse witness needs p > q, got " + to_string(rel));
  WitnessField w = build_equality_witness(s, q, p, 1.0, options);
  w.kind = WitnessCase::Reverse;
  std::swap(w.p, w.q);
  finish_values(w);
  return w;
}

WitnessField build_unrelated_witness(const Spacetime& s, const Point& p, const Point& q, double epsilon,
                                     const WitnessOptions& options) {
  require_covering_support(s);
  const CausalRelation rel = classify_pair(s, p, q);
  if (rel != CausalRelation::Unrelated) {
    throw Error(ErrorKind::PairNotUnrelated, "unrelated witness needs causally unrelated points, got " + to_string(rel));
  }
  if (!(epsilon > 0.0)) throw Error(ErrorKind::PreconditionViolated, "epsilon must be positive");

  WitnessField w;
  w.kind = WitnessCase::Unrelated;
  w.p = p;
  w.q = q;
  w.epsilon = epsilon;

  // S passes through the later point; the earlier one must lie in J^-(S).
  const bool swapped = p.t() > q.t();
  w.roles_swapped = swapped;
  const Point& low = swapped ? q : p;
  const Point& high = swapped ? p : q;
  const CauchySurface S{high.t()};
  const Point tilde = s.point({S.level, low[1]});

  std::optional<Point> low_prime;
  std::optional<Point> high_prime;
  for (double o = options.initial_offset; o >= options.min_offset; o *= 0.5) {
    w.offsets_tried.push_back(o);
    const Point lp = offset(s, low, time_step(s.dim(), -o));
    const Point hp = offset(s, high, time_step(s.dim(), -o));
    const bool small = exact_distance(s, lp, low) < 0.5 * epsilon && exact_distance(s, hp, high) < 0.5 * epsilon;
    if (small && traces_disjoint(s, chronological_trace(s, lp, S), chronological_trace(s, hp, S))) {
      low_prime = lp;
      high_prime = hp;
      break;
    }
  }
  if (!low_prime) {
    throw Error(ErrorKind::DisjointTracesImpossible,
                "no offset down to min_offset separates the cone traces of p' and q' on S");
  }

  const SurfaceTrace low_trace = chronological_trace(s, *low_prime, S);
  const SurfaceTrace high_trace = chronological_trace(s, *high_prime, S);
  std::optional<Point> tilde_prime;
  std::optional<Point> high_guard;
  for (double o = options.initial_offset; o >= options.min_offset; o *= 0.5) {
    const Point tp = offset(s, tilde, time_step(s.dim(), o));
    const Point hg = offset(s, high, time_step(s.dim(), o));
    if (trace_contains(s, low_trace, chronological_trace(s, tp, S)) &&
        trace_contains(s, high_trace, chronological_trace(s, hg, S))) {
      tilde_prime = tp;
      high_guard = hg;
      break;
    }
  }
  if (!tilde_prime) throw Error(ErrorKind::PreconditionViolated, "offset schedule exhausted choosing the upper guards");

  w.verification_box = verification_box(s, p, q, options.verification_resolution, options.verification_margin);
  const CoveringOptions cov = covering_options_for(s, w.verification_box, options);
  w.upper = build_covering_witness(s, S, CoverSide::Above, {tilde, high}, {*tilde_prime, *high_guard}, cov);
  w.lower = build_covering_witness(s, S, CoverSide::Below, {low, high}, {*low_prime, *high_prime}, cov);
  w.auxiliary = {{"p_prime", *low_prime},
                 {"q_prime", *high_prime},
                 {"p_tilde", tilde},
                 {"p_tilde_prime", *tilde_prime},
                 {"q_tilde_prime", *high_guard}};

  const ScalarField anchors = distance_field(s, *low_prime, DistanceDirection::FromBase) +
                              distance_field(s, *high_prime, DistanceDirection::FromBase);
  w.field_ = (w.upper->field() - w.lower->field() + anchors).renamed("unrelated witness f1 - f2 + d(p',.) + d(q',.)");
  finish_values(w);
  return w;
}

}  // namespace lorentz
