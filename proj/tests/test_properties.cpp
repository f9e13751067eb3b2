// Randomized invariants, seeded so failures reproduce.

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "lorentz/distance.hpp"
#include "lorentz/eikonal.hpp"
#include "lorentz/error.hpp"
#include "lorentz/verify.hpp"
#include "lorentz/witness.hpp"

using namespace lorentz;

namespace {

std::vector<Spacetime> catalog() {
  return {Spacetime::minkowski(2),
          Spacetime::minkowski(3),
          Spacetime::minkowski(4),
          Spacetime::flat_cylinder(),
          Spacetime::conformally_flat(ConformalFactor::constant(1.5)),
          Spacetime::conformally_flat(ConformalFactor::time_quadratic(1.0, 0.1)),
          Spacetime::conformally_flat(ConformalFactor::bump(0.5, 1.0))};
}

std::vector<Spacetime> flat_catalog() {
  return {Spacetime::minkowski(2), Spacetime::minkowski(3), Spacetime::minkowski(4), Spacetime::flat_cylinder()};
}

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

  Point point(const Spacetime& s, double span = 3.0) {
    Vector c(s.dim());
    for (int i = 0; i < s.dim(); ++i) c[i] = uniform(-span, span);
    return s.point(c);
  }

  // Future timelike displacement with time component in [lo, hi].
  Vector future_step(int dim, double lo, double hi) {
    Vector v(dim);
    v[0] = uniform(lo, hi);
    Vector dir(dim - 1);
    for (int i = 0; i < dim - 1; ++i) dir[i] = std::normal_distribution<double>()(rng);
    const double speed = uniform(0.0, 0.95);
    dir *= speed * v[0] / std::max(dir.norm(), 1e-300);
    for (int i = 1; i < dim; ++i) v[i] = dir[i - 1];
    return v;
  }
};

Point shift(const Spacetime& s, const Point& p, const Vector& v) { return s.point(Vector(p.coords + v)); }

bool future_type(const Spacetime& s, const Point& p, const Point& q) { return is_future_type(classify_pair(s, p, q)); }

}  // namespace

TEST(GeometryProperties, SignatureHasOneNegativeEigenvalue) {
  Sampler r(1);
  for (const auto& s : catalog()) {
    for (int i = 0; i < 200; ++i) {
      const Matrix g = metric_components(s, r.point(s));
      const Eigen::MatrixXd dense = g;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
      int negative = 0;
      for (int k = 0; k < g.rows(); ++k) negative += eig.eigenvalues()[k] < 0.0;
      EXPECT_EQ(negative, 1) << s.name();
    }
  }
}

TEST(GeometryProperties, RaisedGradientPairsLikeTheCovector) {
  Sampler r(2);
  for (const auto& s : catalog()) {
    for (int i = 0; i < 200; ++i) {
      const Point x = r.point(s);
      Covector df(s.dim());
      Vector u(s.dim());
      for (int k = 0; k < s.dim(); ++k) {
        df[k] = r.uniform(-1, 1);
        u[k] = r.uniform(-1, 1);
      }
      const double lhs = inner(s, x, raise_gradient(s, x, df), TangentVector{x, u});
      EXPECT_NEAR(lhs, df.dot(u), 1e-12) << s.name();
    }
  }
}

TEST(GeometryProperties, CharacterIsScaleInvariantAndFlipsOrientation) {
  Sampler r(3);
  for (const auto& s : catalog()) {
    for (int i = 0; i < 200; ++i) {
      const Point x = r.point(s);
      Vector v(s.dim());
      for (int k = 0; k < s.dim(); ++k) v[k] = r.uniform(-1, 1);
      const CausalCharacter c = causal_character(s, x, {x, v});
      const double a = r.uniform(0.01, 100.0);
      EXPECT_EQ(causal_character(s, x, {x, Vector(a * v)}), c);
      const CausalCharacter flipped = causal_character(s, x, {x, Vector(-v)});
      EXPECT_EQ(flipped.kind, c.kind);
      if (c.orientation == TimeOrientation::Future) EXPECT_EQ(flipped.orientation, TimeOrientation::Past);
      if (c.orientation == TimeOrientation::Past) EXPECT_EQ(flipped.orientation, TimeOrientation::Future);
    }
  }
}

TEST(CausalProperties, FutureIsTransitive) {
  Sampler r(4);
  for (const auto& s : catalog()) {
    for (int i = 0; i < 300; ++i) {
      const Point p = r.point(s);
      const Point q = shift(s, p, r.future_step(s.dim(), 0.0, 2.0));
      const Point z = shift(s, q, r.future_step(s.dim(), 0.0, 2.0));
      ASSERT_TRUE(future_type(s, p, q));
      ASSERT_TRUE(future_type(s, q, z));
      EXPECT_TRUE(future_type(s, p, z)) << s.name();
    }
  }
}

TEST(CausalProperties, NoPairIsBothFutureAndPast) {
  Sampler r(5);
  for (const auto& s : catalog()) {
    for (int i = 0; i < 500; ++i) {
      const Point p = r.point(s);
      const Point q = r.point(s);
      const CausalRelation pq = classify_pair(s, p, q);
      const CausalRelation qp = classify_pair(s, q, p);
      EXPECT_FALSE(is_future_type(pq) && is_past_type(pq));
      EXPECT_EQ(is_future_type(pq), is_past_type(qp));
    }
  }
}

TEST(CausalProperties, ChronologicalIffPositiveDistance) {
  Sampler r(6);
  for (const auto& s : flat_catalog()) {
    for (int i = 0; i < 500; ++i) {
      const Point p = r.point(s);
      const Point q = r.point(s);
      const bool chrono = classify_pair(s, p, q) == CausalRelation::ChronologicalFuture;
      EXPECT_EQ(chrono, *closed_form_distance(s, p, q) > 0.0) << s.name();
    }
  }
}

TEST(CausalProperties, ConeTraceShrinksToZeroAtTheSurface) {
  for (const auto& s : catalog()) {
    if (s.dim() != 2) continue;
    const CauchySurface S{1.0};
    double previous = std::numeric_limits<double>::infinity();
    for (double depth : {0.5, 0.1, 0.01, 1e-4, 1e-8}) {
      const double d = cone_trace_diameter(s, s.point({1.0 - depth, 0.3}), S);
      EXPECT_LE(d, previous);
      previous = d;
    }
    EXPECT_LT(previous, 1e-7) << s.name();
  }
}

TEST(DistanceProperties, CollinearMidpointKeepsTheLength) {
  Sampler r(7);
  for (const auto& s : catalog()) {
    for (int i = 0; i < 100; ++i) {
      const Point p = r.point(s);
      const Vector step = r.future_step(s.dim(), 0.1, 2.0);
      Curve straight;
      Curve split;
      // Cover coordinates: keep the raw sum so the segment does not wrap.
      straight.nodes = {p, Point{Vector(p.coords + step)}};
      split.nodes = {p, Point{Vector(p.coords + 0.5 * step)}, Point{Vector(p.coords + step)}};
      EXPECT_NEAR(curve_length(s, straight), curve_length(s, split), 1e-10) << s.name();
    }
  }
}

TEST(DistanceProperties, PathSearchNeverExceedsTheClosedForm) {
  Sampler r(8);
  for (const auto& s : flat_catalog()) {
    for (int i = 0; i < 15; ++i) {
      const Point p = r.point(s);
      const Point q = shift(s, p, r.future_step(s.dim(), 0.2, 4.0));
      PathSearchOptions opt;
      opt.segments = 2 + i % 6;
      opt.restarts = 2;
      opt.seed = i;
      EXPECT_LE(max_path_search(s, p, q, opt).length, *closed_form_distance(s, p, q) + 1e-9) << s.name();
    }
  }
}

TEST(DistanceProperties, MoreRestartsNeverHurt) {
  Sampler r(9);
  const auto s = Spacetime::flat_cylinder();
  for (int i = 0; i < 5; ++i) {
    const Point p = r.point(s);
    const Point q = shift(s, p, r.future_step(2, 0.5, 3.0));
    double previous = 0.0;
    for (int restarts : {1, 2, 4, 8}) {
      const double v = max_path_distance(s, p, q, 8, restarts, 17);
      EXPECT_GE(v, previous);
      previous = v;
    }
  }
}

TEST(DistanceProperties, MinkowskiPathSearchConverges) {
  Sampler r(10);
  const auto s = Spacetime::minkowski(2);
  int tested = 0;
  while (tested < 20) {
    const Point p = r.point(s);
    const Point q = shift(s, p, r.future_step(2, 0.5, 3.0));
    const double d = *closed_form_distance(s, p, q);
    if (d < 0.5) continue;
    EXPECT_LT(d - max_path_distance(s, p, q, 8, 20, tested), 1e-2);
    ++tested;
  }
}

TEST(DistanceProperties, DistanceFieldsAreMonotoneAlongCausalCurves) {
  Sampler r(11);
  for (const auto& s : flat_catalog()) {
    for (int i = 0; i < 50; ++i) {
      const Point base = r.point(s, 1.0);
      const ScalarField d = distance_field(s, base, DistanceDirection::FromBase);
      const ScalarField back = distance_field(s, base, DistanceDirection::ToBase);
      Point z = r.point(s, 2.0);
      double prev = d(z);
      double prev_back = back(z);
      for (int k = 0; k < 10; ++k) {
        z = shift(s, z, r.future_step(s.dim(), 0.0, 0.5));
        const double now = d(z);
        const double now_back = back(z);
        EXPECT_GE(now, prev - 1e-12) << s.name();
        // d(z, base) can only shrink as z moves to the future.
        EXPECT_LE(now_back, prev_back + 1e-12) << s.name();
        prev = now;
        prev_back = now_back;
      }
    }
  }
}

TEST(EikonalProperties, CentralDifferencesConvergeAtSecondOrder) {
  // The eikonal value of the Minkowski distance is flat to roundoff even for
  // coarse steps, so the order is measured on the differential itself.
  const auto s = Spacetime::minkowski(2);
  const ScalarField d = distance_field(s, s.point({0, 0}), DistanceDirection::FromBase);
  for (const Point& z : {s.point({1.0, 0.3}), s.point({0.8, -0.5}), s.point({1.5, 1.0})}) {
    const Covector exact = *d.differential(s, z);
    const double e2 = (*d.with_central_difference(1e-2).differential(s, z) - exact).norm();
    const double e3 = (*d.with_central_difference(1e-3).differential(s, z) - exact).norm();
    ASSERT_GT(e3, 0.0);
    EXPECT_GE(std::log10(e2 / e3), 1.9);
    EXPECT_LE(std::log10(e2 / e3), 2.1);
  }
}

TEST(EikonalProperties, AdmissibleFieldsOrderTheReferencePair) {
  // Any admissible field separates p0 = (0,0) < q0 = (1,0) by at least d = 1.
  const auto cyl = Spacetime::flat_cylinder();
  const Point p0 = cyl.point({0, 0});
  const Point q0 = cyl.point({1, 0});
  std::vector<ScalarField> fields = {affine_time_field(2, 1.0), affine_time_field(2, 2.0, -3.0),
                                     build_equality_witness(cyl, p0, q0, 0.1).field(),
                                     build_unrelated_witness(cyl, cyl.point({0.2, 2}), cyl.point({0.4, 4}), 0.1)
                                         .field()};
  GridSpec box;
  box.box = {{-1.0, 2.0}, {0.0, kTwoPi}};
  box.resolution = {61, 61};
  for (const ScalarField& f : fields) {
    if (!check_admissible(cyl, f, box).verdict) continue;
    EXPECT_GE(f(q0) - f(p0), 1.0 - 1e-6) << f.description();
  }
}

TEST(WitnessProperties, CaseContractsOnRandomPairs) {
  Sampler r(12);
  const auto cyl = Spacetime::flat_cylinder();
  for (int i = 0; i < 6; ++i) {
    const Point p = cyl.point({r.uniform(-1, 1), r.uniform(0, kTwoPi)});
    const Point q = shift(cyl, p, r.future_step(2, 0.3, 3.0));
    const double eps = i % 2 ? 0.1 : 0.01;
    const double d = *closed_form_distance(cyl, p, q);
    const WitnessField e = build_equality_witness(cyl, p, q, eps);
    const double slack = lower_bound_slack(cyl, e.field(), p, q);
    EXPECT_GE(slack, -1e-12);
    EXPECT_LT(slack, eps);
    EXPECT_NEAR(e.value_difference - d, slack, 1e-12);

    const WitnessField back = build_reverse_witness(cyl, q, p);
    EXPECT_EQ(std::max(0.0, back.value_difference), 0.0);
  }
  int unrelated = 0;
  while (unrelated < 6) {
    const Point p = cyl.point({r.uniform(-1, 1), r.uniform(0, kTwoPi)});
    const Point q = cyl.point({r.uniform(-1, 1), r.uniform(0, kTwoPi)});
    if (classify_pair(cyl, p, q) != CausalRelation::Unrelated) continue;
    for (double eps : {0.1, 0.01}) {
      try {
        EXPECT_LT(std::abs(build_unrelated_witness(cyl, p, q, eps).value_difference), eps);
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DisjointTracesImpossible);
      }
    }
    ++unrelated;
  }
}

TEST(WitnessProperties, CrossTermsAreNonPositive) {
  Sampler r(13);
  const auto cyl = Spacetime::flat_cylinder();
  const auto w = build_covering_witness(cyl, CauchySurface{1.0}, CoverSide::Above, {cyl.point({1, 0})},
                                        {cyl.point({1.4, 0})});
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const Point z = cyl.point({r.uniform(1.0, 3.0), r.uniform(0, kTwoPi)});
    const auto& gens = w.generators;
    const Point& a = gens[std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(r.rng)];
    const Point& b = gens[std::uniform_int_distribution<std::size_t>(0, gens.size() - 1)(r.rng)];
    const auto da = distance_gradient(cyl, a, z, DistanceDirection::FromBase);
    const auto db = distance_gradient(cyl, b, z, DistanceDirection::FromBase);
    if (!da || !db) continue;
    const double cross = inner(cyl, z, raise_gradient(cyl, z, *da), raise_gradient(cyl, z, *db));
    EXPECT_LE(cross, 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(VerifyProperties, SandwichSoundOnRandomPairs) {
  Sampler r(14);
  for (const auto& s : {Spacetime::minkowski(2), Spacetime::flat_cylinder()}) {
    for (int i = 0; i < 6; ++i) {
      const Point p = s.point({r.uniform(-1, 1), r.uniform(0, 3)});
      const Point q = s.point({r.uniform(-1, 2), r.uniform(0, 3)});
      VerifyOptions opt;
      opt.path.restarts = 4;
      const SandwichReport rep = sandwich_report(s, p, q, opt);
      EXPECT_LE(rep.estimate.lower - 1e-9, *rep.estimate.closed_form);
      EXPECT_LE(*rep.estimate.closed_form, rep.estimate.upper + opt.tolerances.analytic);
      EXPECT_TRUE(rep.contracts.all()) << s.name();
    }
  }
}

TEST(VerifyProperties, LongerScheduleNeverRaisesTheUpperBound) {
  Sampler r(15);
  const auto cyl = Spacetime::flat_cylinder();
  for (int i = 0; i < 4; ++i) {
    const Point p = cyl.point({r.uniform(-1, 1), r.uniform(0, kTwoPi)});
    const Point q = shift(cyl, p, r.future_step(2, 0.5, 3.0));
    const double short_schedule = variational_distance(cyl, p, q, {0.1});
    const double long_schedule = variational_distance(cyl, p, q, {0.1, 0.01, 0.001});
    EXPECT_LE(long_schedule, short_schedule);
  }
}

TEST(VerifyProperties, GapShrinksWithFinerBudgets) {
  Sampler r(16);
  const auto cyl = Spacetime::flat_cylinder();
  for (int i = 0; i < 3; ++i) {
    const Point p = cyl.point({r.uniform(-1, 1), r.uniform(0, kTwoPi)});
    const Point q = shift(cyl, p, r.future_step(2, 1.0, 3.0));
    VerifyOptions coarse;
    coarse.epsilons = {0.1};
    coarse.path.restarts = 4;
    VerifyOptions fine = coarse;
    fine.epsilons = {0.1, 0.01};
    fine.path.segments = 16;
    const double g1 = sandwich_report(cyl, p, q, coarse).estimate.gap();
    const double g2 = sandwich_report(cyl, p, q, fine).estimate.gap();
    EXPECT_LE(g2, g1 + 1e-12);
  }
}

TEST(VerifyProperties, TrichotomyOfTheUpperBound) {
  Sampler r(17);
  const auto cyl = Spacetime::flat_cylinder();
  int past = 0;
  int unrelated = 0;
  while (past < 5 || unrelated < 5) {
    const Point p = cyl.point({r.uniform(-1, 1), r.uniform(0, kTwoPi)});
    const Point q = cyl.point({r.uniform(-1, 1), r.uniform(0, kTwoPi)});
    const CausalRelation rel = classify_pair(cyl, p, q);
    if (rel == CausalRelation::ChronologicalPast && past < 5) {
      EXPECT_EQ(variational_distance(cyl, p, q), 0.0);
      ++past;
    } else if (rel == CausalRelation::Unrelated && unrelated < 5) {
      EXPECT_LT(variational_distance(cyl, p, q), 0.01);
      ++unrelated;
    }
  }
}
