#include "lorentz/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "lorentz/error.hpp"
#include "lorentz/quadrature.hpp"

namespace lorentz {

namespace {

// sqrt(dt^2 - dx^2) in factored form, which keeps accuracy near the cone.
double lorentz_norm(double dt, double dx) {
  const double a = dt - dx;
  const double b = dt + dx;
  return (a > 0.0 && b > 0.0) ? std::sqrt(a * b) : 0.0;
}

bool future_causal(const Spacetime& s, const Point& x, const Vector& v) {
  const bool zero = (v.array() == 0.0).all();
  const CausalCharacter c =
      classify_components(inner_components(s, x, v, v), v[0], zero, s.null_tolerance());
  return c.causal() && c.orientation == TimeOrientation::Future;
}

}  // namespace

double curve_length(const Spacetime& s, const Curve& curve, int quadrature_n) {
  if (curve.nodes.size() < 2) {
    throw Error(ErrorKind::PreconditionViolated, "a curve needs at least two nodes");
  }
  const GaussLegendre rule(quadrature_n);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < curve.nodes.size(); ++k) {
    const Vector& a = curve.nodes[k].coords;
    const Vector& b = curve.nodes[k + 1].coords;
    if (a.size() != s.dim() || b.size() != s.dim()) {
      throw Error(ErrorKind::InvalidPoint, "curve node dimension mismatch");
    }
    const Vector v = b - a;
    if ((v.array() == 0.0).all()) {
      throw Error(ErrorKind::PreconditionViolated, "consecutive curve nodes coincide");
    }
    total += rule.integrate(0.0, 1.0, [&](double u) {
      const Point x{a + u * v};
      if (!future_causal(s, x, v)) {
        std::ostringstream msg;
        msg << "segment " << k << " is not future directed causal";
        throw Error(ErrorKind::NonCausalSegment, msg.str());
      }
      // Tangents inside the null band count as null: no proper time.
      const double minus_g = -inner_components(s, x, v, v);
      return minus_g > s.null_tolerance() ? std::sqrt(minus_g) : 0.0;
    });
  }
  return total;
}

std::optional<double> closed_form_distance(const Spacetime& s, const Point& p, const Point& q) {
  if (s.kind() == Spacetime::Kind::ConformallyFlat) return std::nullopt;
  if (classify_pair(s, p, q) != CausalRelation::ChronologicalFuture) return 0.0;
  const double dt = q.t() - p.t();
  if (s.kind() == Spacetime::Kind::Minkowski) {
    return lorentz_norm(dt, (q.coords - p.coords).tail(s.dim() - 1).norm());
  }
  // Winding search: every curve from p to q lifts to the cover with some
  // angular displacement raw + kC; windings with |raw + kC| > dt are spacelike.
  const double c = s.circumference();
  const double raw = q[1] - p[1];
  const int k_max = static_cast<int>(std::ceil(std::abs(dt) / c)) + 1;
  double best = 0.0;
  for (int k = -k_max; k <= k_max; ++k) best = std::max(best, lorentz_norm(dt, std::abs(raw + k * c)));
  return best;
}

double exact_distance(const Spacetime& s, const Point& p, const Point& q) {
  auto d = closed_form_distance(s, p, q);
  if (!d) throw Error(ErrorKind::Unsupported, "no closed-form distance on " + s.name());
  return *d;
}

// ---------------------------------------------------------------------------
// Path maximization

namespace {

class PathAscent {
 public:
  PathAscent(const Spacetime& s, const GaussLegendre& rule, const PathSearchOptions& options)
      : s_(s), rule_(rule), options_(options) {}

  bool causal(const Vector& a, const Vector& b) const {
    const Vector d = b - a;
    if (!(d[0] > 0.0)) return false;
    // Strict: segments inside the null band could otherwise trade tolerance
    // for proper time, and sqrt turns 1e-10 of slack into 1e-5 of length.
    return -d[0] * d[0] + d.tail(d.size() - 1).squaredNorm() <= 0.0;
  }

  double segment_length(const Vector& a, const Vector& b) {
    ++evaluations_;
    const Vector d = b - a;
    const double flat = lorentz_norm(d[0], d.tail(d.size() - 1).norm());
    if (s_.flat() || flat == 0.0) return flat;
    return flat * rule_.integrate(0.0, 1.0, [&](double u) {
      const Vector x = a + u * d;
      return s_.factor()(x[0], x[1]);
    });
  }

  bool feasible(const std::vector<Vector>& nodes) const {
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      if (!causal(nodes[i], nodes[i + 1])) return false;
    }
    return true;
  }

  // Returns the improved node set; nodes.front()/back() stay fixed.
  std::vector<Vector> run(const Vector& from, const Vector& to, std::mt19937_64& rng) {
    const int n = options_.segments;
    const int dim = static_cast<int>(from.size());
    const double dt = to[0] - from[0];
    const double scale = dt / n;

    std::vector<Vector> chord(n + 1);
    for (int i = 0; i <= n; ++i) chord[i] = from + (static_cast<double>(i) / n) * (to - from);

    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    if (!feasible(chord)) return chord;
    std::vector<Vector> nodes = chord;
    for (int i = 1; i < n; ++i) {
      nodes[i][0] += 0.3 * scale * jitter(rng);
      for (int c = 1; c < dim; ++c) nodes[i][c] += 0.6 * scale * jitter(rng);
    }
    if (!feasible(nodes)) nodes = project(nodes, chord);

    std::vector<double> lengths(n);
    for (int i = 0; i < n; ++i) lengths[i] = segment_length(nodes[i], nodes[i + 1]);

    // Node times stay where the jitter put them: sliding a node along a
    // straight piece only reparametrizes it, and that flat direction stalls
    // the ascent. Spatial coordinates use adaptive steps that grow on success
    // and shrink on failure.
    std::vector<double> steps((n - 1) * dim, 0.25 * scale);
    const double min_step = 1e-9 * std::max(1.0, dt);
    for (int sweep = 0; sweep < options_.max_sweeps; ++sweep) {
      bool active = false;
      for (int i = 1; i < n; ++i) {
        for (int c = 1; c < dim; ++c) {
          double& step = steps[(i - 1) * dim + c];
          if (step < min_step) continue;
          active = true;
          bool moved = false;
          for (double sign : {1.0, -1.0}) {
            Vector trial = nodes[i];
            trial[c] += sign * step;
            if (!causal(nodes[i - 1], trial) || !causal(trial, nodes[i + 1])) continue;
            const double left = segment_length(nodes[i - 1], trial);
            const double right = segment_length(trial, nodes[i + 1]);
            // Reparametrizing along a straight piece leaves the length unchanged
            // up to rounding, so demand a gain above a few ulps.
            const double before = lengths[i - 1] + lengths[i];
            if (left + right > before + 8.0 * std::numeric_limits<double>::epsilon() * before) {
              nodes[i] = trial;
              lengths[i - 1] = left;
              lengths[i] = right;
              moved = true;
              break;
            }
          }
          step = moved ? std::min(2.0 * step, scale) : 0.5 * step;
        }
      }
      if (!active) break;
    }
    return nodes;
  }

  long evaluations() const { return evaluations_; }

 private:
  // The causal segment constraints are second-order cones, so the feasible
  // set is convex and contains the chord; bisect along the blend towards it.
  std::vector<Vector> project(const std::vector<Vector>& nodes, const std::vector<Vector>& chord) const {
    auto blend = [&](double lambda) {
      std::vector<Vector> out(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = (1.0 - lambda) * nodes[i] + lambda * chord[i];
      out.front() = chord.front();
      out.back() = chord.back();
      return out;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 60; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (feasible(blend(mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    // Step a little further in so no segment starts on the cone, where single
    // coordinate moves cannot leave the boundary.
    return blend(hi + 0.1 * (1.0 - hi));
  }

  const Spacetime& s_;
  const GaussLegendre& rule_;
  const PathSearchOptions& options_;
  long evaluations_ = 0;
};

}  // namespace

PathSearchResult max_path_search(const Spacetime& s, const Point& p, const Point& q,
                                 const PathSearchOptions& options) {
  if (options.segments < 1 || options.restarts < 1) {
    throw Error(ErrorKind::PreconditionViolated, "path search needs >= 1 segment and >= 1 restart");
  }
  const CausalRelation rel = classify_pair(s, p, q);
  PathSearchResult result;
  if (rel == CausalRelation::Equal) {
    result.best.nodes = {p};
    result.restart_lengths.assign(options.restarts, 0.0);
    return result;
  }
  if (!is_future_type(rel)) {
    throw Error(ErrorKind::NoCausalPath, "q is not in the causal future of p (" + to_string(rel) + ")");
  }
  if (rel == CausalRelation::NullBoundaryFuture) {
    // Only null curves reach the boundary of J+(p) here, so the supremum is 0.
    Vector end = q.coords;
    if (s.periodic()) end[1] = p[1] + std::remainder(q[1] - p[1], s.circumference());
    result.best.nodes = {p, Point{end}};
    result.restart_lengths.assign(options.restarts, 0.0);
    return result;
  }

  std::vector<Vector> targets;
  if (s.periodic()) {
    const double c = s.circumference();
    const double dt = q.t() - p.t();
    const double raw = q[1] - p[1];
    const int k_max = static_cast<int>(std::ceil(dt / c)) + 1;
    for (int k = -k_max; k <= k_max; ++k) {
      const double dth = raw + k * c;
      if (dt > std::abs(dth)) {
        Vector lifted = q.coords;
        lifted[1] = p[1] + dth;
        targets.push_back(lifted);
      }
    }
  } else {
    targets.push_back(q.coords);
  }

  const GaussLegendre rule(options.quadrature_n);
  PathAscent ascent(s, rule, options);
  double best_len = -1.0;
  std::vector<Vector> best_nodes;
  for (int r = 0; r < options.restarts; ++r) {
    double restart_best = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(k)};
      std::mt19937_64 rng(seq);
      std::vector<Vector> nodes = ascent.run(p.coords, targets[k], rng);
      double len = 0.0;
      for (std::size_t i = 0; i + 1 < nodes.size(); ++i) len += ascent.segment_length(nodes[i], nodes[i + 1]);
      restart_best = std::max(restart_best, len);
      if (len > best_len) {
        best_len = len;
        best_nodes = std::move(nodes);
      }
    }
    const double prev = result.restart_lengths.empty() ? 0.0 : result.restart_lengths.back();
    result.restart_lengths.push_back(std::max(prev, restart_best));
  }

  for (const Vector& v : best_nodes) result.best.nodes.push_back(Point{v});
  result.length = curve_length(s, result.best, options.quadrature_n);
  result.evaluations = ascent.evaluations();
  return result;
}

double max_path_distance(const Spacetime& s, const Point& p, const Point& q, int n_segments, int restarts,
                         std::uint64_t seed) {
  PathSearchOptions options;
  options.segments = n_segments;
  options.restarts = restarts;
  options.seed = seed;
  return max_path_search(s, p, q, options).length;
}

// ---------------------------------------------------------------------------
// Distance fields

double distance_seam_gap(double a, double b, std::optional<double> circumference) {
  double gap = (a + b >= 0.0) ? std::abs(a - b) / std::numbers::sqrt2 : std::hypot(a, b);
  if (circumference) {
    const double half = 0.5 * *circumference;
    const double tie = (a >= half) ? half - b : std::hypot(half - a, half - b);
    gap = std::min(gap, tie);
  }
  return gap;
}

std::optional<Covector> distance_gradient(const Spacetime& s, const Point& base, const Point& z,
                                          DistanceDirection direction) {
  const bool from = direction == DistanceDirection::FromBase;
  const Point& lo = from ? base : z;
  const Point& hi = from ? z : base;
  const CausalRelation rel = classify_pair(s, lo, hi);
  if (rel == CausalRelation::Equal || rel == CausalRelation::NullBoundaryFuture) return std::nullopt;
  if (rel != CausalRelation::ChronologicalFuture) return Covector(Covector::Zero(s.dim()));
  const Vector d = s.displacement(lo, hi);
  const double m = d.tail(s.dim() - 1).norm();
  if (s.periodic() && std::abs(m - 0.5 * s.circumference()) <= s.null_tolerance()) return std::nullopt;
  const double dist = lorentz_norm(d[0], m);
  // d/d(hi) of sqrt(dt^2 - |dx|^2) is (dt, -dx)/d; d/d(lo) is its negative.
  Covector df(s.dim());
  df[0] = d[0] / dist;
  df.tail(s.dim() - 1) = -d.tail(s.dim() - 1) / dist;
  if (!from) df = -df;
  return df;
}

ScalarField distance_field(const Spacetime& s, const Point& base, DistanceDirection direction) {
  if (s.kind() == Spacetime::Kind::ConformallyFlat) {
    throw Error(ErrorKind::Unsupported, "distance fields need a closed-form distance");
  }
  const bool from = direction == DistanceDirection::FromBase;
  std::ostringstream name;
  name << (from ? "d(p," : "d(.,p)") << (from ? ".)" : "") << " p=(";
  for (int i = 0; i < base.dim(); ++i) name << (i ? "," : "") << base[i];
  name << ")";

  auto value = [s, base, from](const Point& z) {
    return from ? exact_distance(s, base, z) : exact_distance(s, z, base);
  };
  auto differential = [s, base, direction](const Point& z) { return distance_gradient(s, base, z, direction); };
  std::optional<double> circ;
  if (s.periodic()) circ = s.circumference();
  auto seam = [s, base, from, circ](const Point& z) {
    const Point& lo = from ? base : z;
    const Point& hi = from ? z : base;
    return distance_seam_gap(hi.t() - lo.t(), s.spatial_separation(lo, hi), circ);
  };
  return ScalarField(name.str(), value, differential, seam);
}

}  // namespace lorentz
