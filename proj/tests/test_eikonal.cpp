#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "lorentz/distance.hpp"
#include "lorentz/eikonal.hpp"
#include "lorentz/error.hpp"

using namespace lorentz;

namespace {

TangentVector vec(const Point& at, double t, double x) {
  Vector v(2);
  v << t, x;
  return {at, v};
}

GridSpec square(double lo, double hi, int n) {
  GridSpec g;
  g.box = {{lo, hi}, {lo, hi}};
  g.resolution = {n, n};
  return g;
}

}  // namespace

TEST(EikonalValue, Examples) {
  const auto m = Spacetime::minkowski(2);
  const Point x = m.point({0.7, -0.2});
  EXPECT_EQ(eikonal_value(m, affine_time_field(2, 1.0), x), -1.0);
  EXPECT_EQ(eikonal_value(m, affine_time_field(2, 2.0), x), -4.0);
  const ScalarField d = distance_field(m, m.point({0, 0}), DistanceDirection::FromBase);
  EXPECT_NEAR(eikonal_value(m, d, m.point({3, 1})), -1.0, 1e-8);
}

TEST(EikonalValue, SeamsAreUndefined) {
  const auto m = Spacetime::minkowski(2);
  const ScalarField d = distance_field(m, m.point({0, 0}), DistanceDirection::FromBase);
  try {
    eikonal_value(m, d, m.point({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UndefinedPoint);
  }
  EXPECT_THROW(eikonal_value(m, d, m.point({1, 0.97}), 0.05), Error);
}

TEST(CheckAdmissible, Examples) {
  const auto m = Spacetime::minkowski(2);
  const GridSpec g = square(-3, 3, 101);
  const auto t = check_admissible(m, affine_time_field(2, 1.0), g);
  EXPECT_TRUE(t.verdict);
  EXPECT_EQ(t.ess_sup_estimate, -1.0);
  EXPECT_EQ(t.violation_fraction, 0.0);
  EXPECT_EQ(t.total_samples, 101u * 101u);

  const auto half = check_admissible(m, affine_time_field(2, 0.5), g);
  EXPECT_FALSE(half.verdict);
  EXPECT_EQ(half.ess_sup_estimate, -0.25);

  const auto reversed = check_admissible(m, affine_time_field(2, -1.0), g);
  EXPECT_FALSE(reversed.verdict);
  EXPECT_FALSE(reversed.orientation_ok);
}

TEST(CheckAdmissible, CentralDifferencesUseTheLooserTolerance) {
  const auto m = Spacetime::minkowski(2);
  const ScalarField f = affine_time_field(2, 1.0).with_central_difference(1e-4);
  const auto r = check_admissible(m, f, square(-1, 1, 21));
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.tolerance, EikonalTolerances{}.finite_difference);
}

TEST(CheckAdmissible, ReductionIgnoresSampleOrder) {
  const auto cyl = Spacetime::flat_cylinder();
  const ScalarField d = distance_field(cyl, cyl.point({0, 0}), DistanceDirection::FromBase) +
                        affine_time_field(2, 0.2);
  GridSpec g;
  g.box = {{0.5, 4.0}, {0.0, kTwoPi}};
  g.resolution = {31, 31};
  auto samples = sample_grid(cyl, d, g);
  const auto a = summarize_admissibility(samples, 1e-6, 0.02);
  std::reverse(samples.begin(), samples.end());
  const auto b = summarize_admissibility(samples, 1e-6, 0.02);
  EXPECT_EQ(a.ess_sup_estimate, b.ess_sup_estimate);
  EXPECT_EQ(a.violation_fraction, b.violation_fraction);
  EXPECT_EQ(a.trimmed_samples, b.trimmed_samples);
}

TEST(GridCsv, HeaderAndRows) {
  const auto m = Spacetime::minkowski(2);
  const auto samples = sample_grid(m, affine_time_field(2, 1.0), square(0, 1, 2));
  std::ostringstream out;
  write_grid_csv(out, samples);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,f,eikonal_value,orientation_ok");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(GridSpec, RefinementNestsTheGrid) {
  const GridSpec g = square(0, 1, 11);
  const GridSpec r = g.refined();
  EXPECT_EQ(r.resolution[0], 21);
  EXPECT_EQ(r.size(), 21u * 21u);
}

TEST(InverseCauchySchwarz, Examples) {
  const auto m = Spacetime::minkowski(2);
  const Point o = m.point({0, 0});
  EXPECT_NEAR(inverse_cauchy_schwarz_slack(m, o, vec(o, 1, 0), vec(o, 2, 1)), 2.0 - std::sqrt(3.0), 1e-15);
  EXPECT_EQ(inverse_cauchy_schwarz_slack(m, o, vec(o, 1, 0), vec(o, 1, 0)), 0.0);
  EXPECT_NEAR(inverse_cauchy_schwarz_slack(m, o, vec(o, 1, 0), vec(o, 5, 3)), 1.0, 1e-15);
  try {
    inverse_cauchy_schwarz_slack(m, o, vec(o, 1, 0), vec(o, 1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonTimelikeInput);
  }
}

TEST(InverseTriangle, Examples) {
  const auto m = Spacetime::minkowski(2);
  EXPECT_NEAR(inverse_triangle_slack(m, m.point({0, 0}), m.point({1, 0.5}), m.point({2, 0})),
              2.0 - 2.0 * std::sqrt(0.75), 1e-15);
  EXPECT_EQ(inverse_triangle_slack(m, m.point({0, 0}), m.point({1, 0}), m.point({2, 0})), 0.0);
  try {
    inverse_triangle_slack(m, m.point({0, 0}), m.point({1, 2}), m.point({2, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ChainNotCausal);
  }
  // (0,0), (2,3), (4,6) on the cylinder: the first leg has gap 3 > 2, so the
  // chain is not causal and the slack is undefined.
  const auto cyl = Spacetime::flat_cylinder();
  EXPECT_THROW(inverse_triangle_slack(cyl, cyl.point({0, 0}), cyl.point({2, 3}), cyl.point({4, 6})), Error);
  EXPECT_GE(inverse_triangle_slack(cyl, cyl.point({0, 0}), cyl.point({3.5, 3}), cyl.point({7, 6})), 0.0);
}

TEST(LowerBoundSlack, Examples) {
  const auto m = Spacetime::minkowski(2);
  const ScalarField t = affine_time_field(2, 1.0);
  EXPECT_EQ(lower_bound_slack(m, t, m.point({0, 0}), m.point({2, 0})), 0.0);
  EXPECT_NEAR(lower_bound_slack(m, t, m.point({0, 0}), m.point({2, 1})), 2.0 - std::sqrt(3.0), 1e-15);
  const ScalarField dp = distance_field(m, m.point({-1, 0}), DistanceDirection::FromBase);
  EXPECT_EQ(lower_bound_slack(m, dp, m.point({0, 0}), m.point({2, 0})), 0.0);
  try {
    lower_bound_slack(m, t, m.point({0, 0}), m.point({1, 2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PairNotCausal);
  }
}
