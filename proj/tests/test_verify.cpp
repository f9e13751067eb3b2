#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <gtest/gtest.h>

#include "lorentz/verify.hpp"

using namespace lorentz;

namespace {

const PropertyRow& row(const SuiteReport& r, const std::string& name) {
  for (const auto& x : r.rows) {
    if (x.name == name) return x;
  }
  throw std::runtime_error("no property " + name);
}

}  // namespace

TEST(Variational, ThreeCasesOnTheCylinder) {
  const auto cyl = Spacetime::flat_cylinder();
  const double future = variational_distance(cyl, cyl.point({0, 0}), cyl.point({1, 0}));
  EXPECT_GE(future, 1.0);
  EXPECT_LT(future, 1.01);
  EXPECT_EQ(variational_distance(cyl, cyl.point({1, 0}), cyl.point({0, 0})), 0.0);
  EXPECT_LT(variational_distance(cyl, cyl.point({0, 2}), cyl.point({0.3, 5})), 0.01);
}

TEST(Variational, EveryCandidateCarriesItsAdmissibilityReport) {
  const auto cyl = Spacetime::flat_cylinder();
  const VariationalResult r = variational_search(cyl, cyl.point({0, 0}), cyl.point({2, 1}));
  ASSERT_GE(r.candidates.size(), 3u);  // baseline + one witness per epsilon
  for (const Candidate& c : r.candidates) {
    ASSERT_TRUE(c.admissibility);
    EXPECT_TRUE(c.admissibility->verdict) << c.label;
  }
  EXPECT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.value, r.candidates[r.best].value);
}

TEST(Variational, BaselineOnlyWhereWitnessesAreUnsupported) {
  const auto m3 = Spacetime::minkowski(3);
  const VariationalResult r = variational_search(m3, m3.point({0, 0, 0}), m3.point({2, 0.5, 0.5}));
  EXPECT_EQ(r.candidates.size(), 1u);
  EXPECT_FALSE(r.notes.empty());
  EXPECT_EQ(r.value, 2.0);  // f = t
}

TEST(Variational, ConformalBaselineSlopeCoversTheFactor) {
  const auto s = Spacetime::conformally_flat(ConformalFactor::time_quadratic(1.0, 0.1));
  GridSpec box;
  box.box = {{0.0, 2.0}, {-1.0, 1.0}};
  box.resolution = {21, 21};
  // sup Omega on the box is 1 + 0.4.
  EXPECT_NEAR(affine_baseline_slope(s, box), 1.4, 1e-12);
  EXPECT_EQ(affine_baseline_slope(Spacetime::minkowski(2), box), 1.0);
}

TEST(Sandwich, Examples) {
  const auto cyl = Spacetime::flat_cylinder();
  const SandwichReport a = sandwich_report(cyl, cyl.point({0, 0}), cyl.point({2, 0}));
  EXPECT_EQ(*a.estimate.closed_form, 2.0);
  EXPECT_GE(a.estimate.lower, 1.99);
  EXPECT_LT(a.estimate.upper, 2.01);
  EXPECT_LT(a.estimate.gap(), 0.02);
  EXPECT_TRUE(a.contracts.all());

  const auto m = Spacetime::minkowski(2);
  const SandwichReport b = sandwich_report(m, m.point({0, 0}), m.point({1, 2}));
  EXPECT_EQ(*b.estimate.closed_form, 0.0);
  EXPECT_EQ(b.estimate.lower, 0.0);
  EXPECT_LT(b.estimate.upper, 0.01);
  EXPECT_TRUE(b.contracts.all());

  const SandwichReport c = sandwich_report(m, m.point({0, 0}), m.point({0, 0}));
  EXPECT_EQ(*c.estimate.closed_form, 0.0);
  EXPECT_EQ(c.estimate.lower, 0.0);
  EXPECT_EQ(c.estimate.upper, 0.0);
  EXPECT_TRUE(c.contracts.all());
}

TEST(Sandwich, WindingPair) {
  const auto cyl = Spacetime::flat_cylinder();
  const SandwichReport r = sandwich_report(cyl, cyl.point({0, 0}), cyl.point({4, std::numbers::pi}));
  EXPECT_NEAR(*r.estimate.closed_form, 2.4758, 2e-4);
  EXPECT_LT(r.estimate.gap(), 0.05);
  EXPECT_TRUE(r.contracts.all());
}

TEST(Sandwich, ConformalPairIsBracketedWithoutAClosedForm) {
  const auto s = Spacetime::conformally_flat(ConformalFactor::bump(0.5, 1.0));
  PathSearchOptions path;
  path.restarts = 4;
  VerifyOptions opt;
  opt.path = path;
  const SandwichReport r = sandwich_report(s, s.point({-1, 0}), s.point({1, 0.2}), opt);
  EXPECT_FALSE(r.estimate.closed_form.has_value());
  EXPECT_LE(r.estimate.lower, r.estimate.upper);
  EXPECT_TRUE(r.contracts.all());
}

TEST(Suite, MinkowskiInverseInequalities) {
  const SuiteReport r = property_suite(Spacetime::minkowski(2), 42, 1000);
  EXPECT_TRUE(row(r, "inverse_cauchy_schwarz").failed == 0);
  EXPECT_TRUE(row(r, "inverse_triangle").failed == 0);
  EXPECT_GE(row(r, "inverse_triangle").worst_slack, -1e-9);
  EXPECT_GE(row(r, "inverse_cauchy_schwarz").worst_slack, -1e-9);
  EXPECT_TRUE(r.all_passed());
}

TEST(Suite, CylinderEikonalResidual) {
  const SuiteReport r = property_suite(Spacetime::flat_cylinder(), 7, 500);
  const PropertyRow& e = row(r, "eikonal_distance_analytic");
  EXPECT_EQ(e.trials, 500);
  EXPECT_EQ(e.failed, 0);
  EXPECT_GE(e.worst_slack, -1e-8);
  EXPECT_TRUE(r.all_passed());
}

TEST(Suite, OneTrialMeansOneSample) {
  const SuiteReport r = property_suite(Spacetime::flat_cylinder(), 1, 1);
  for (const auto& x : r.rows) EXPECT_EQ(x.trials, 1) << x.name;
  std::ostringstream csv;
  write_suite_csv(csv, r);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(r.rows.size()) + 1);
}

TEST(Suite, ConformalEntrySkipsClosedFormProperties) {
  const SuiteReport r =
      property_suite(Spacetime::conformally_flat(ConformalFactor::time_quadratic(1.0, 0.1)), 3, 20);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(row(r, "inverse_triangle").trials, 0);
  EXPECT_FALSE(row(r, "inverse_triangle").note.empty());
  EXPECT_EQ(row(r, "inverse_cauchy_schwarz").trials, 20);
}

TEST(Suite, SameSeedSameNumbers) {
  const auto a = property_suite(Spacetime::minkowski(3), 9, 30);
  const auto b = property_suite(Spacetime::minkowski(3), 9, 30);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    // Skipped rows report NaN, so compare bit patterns.
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.rows[i].worst_slack), std::bit_cast<std::uint64_t>(b.rows[i].worst_slack))
        << a.rows[i].name;
    EXPECT_EQ(a.rows[i].passed, b.rows[i].passed);
  }
}
