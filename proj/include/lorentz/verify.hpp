#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/causal.hpp"
#include "lorentz/distance.hpp"
#include "lorentz/eikonal.hpp"
#include "lorentz/witness.hpp"

namespace lorentz {

struct VerifyOptions {
  std::vector<double> epsilons{0.1, 0.01};
  PathSearchOptions path;
  WitnessOptions witness;
  EikonalTolerances tolerances;
};

/// One member of the family the infimum runs over, with the admissibility
/// report that allowed its value to count.
struct Candidate {
  std::string label;
  std::optional<double> epsilon;
  double difference = 0.0;  // f(q) - f(p)
  double value = 0.0;       // max(0, difference)
  std::optional<AdmissibilityReport> admissibility;
};

struct VariationalResult {
  CausalRelation relation = CausalRelation::Equal;
  double value = 0.0;
  std::vector<Candidate> candidates;
  std::size_t best = 0;
  /// Witness behind the best candidate, when the best is a witness.
  std::optional<WitnessField> witness;
  /// Families that were not available for this spacetime, with the reason.
  std::vector<std::string> notes;
};

/// Infimum of max(0, f(q) - f(p)) over the case witnesses for every epsilon in
/// the schedule plus the affine baseline a t. Each member is re-checked by
/// check_admissible on its box first; a failed check throws WitnessRejected.
VariationalResult variational_search(const Spacetime& s, const Point& p, const Point& q,
                                     const VerifyOptions& options = {});

double variational_distance(const Spacetime& s, const Point& p, const Point& q,
                            const std::vector<double>& epsilons = {0.1, 0.01});

/// Smallest a >= 1 such that a t is admissible on the box (1 on flat entries).
double affine_baseline_slope(const Spacetime& s, const GridSpec& box);

struct SandwichContracts {
  bool lower_below_closed_form = true;  // lower - 1e-9 <= closed_form
  bool closed_form_below_upper = true;  // closed_form <= upper + tol_eik
  bool case_contract = true;            // future: upper - lower >= -tol; else upper < eps_final

  bool all() const { return lower_below_closed_form && closed_form_below_upper && case_contract; }
};

struct SandwichReport {
  CausalRelation relation = CausalRelation::Equal;
  DistanceEstimate estimate;
  VariationalResult variational;
  std::optional<PathSearchResult> path;  // only for future-type pairs
  std::vector<double> epsilons;
  SandwichContracts contracts;
};

SandwichReport sandwich_report(const Spacetime& s, const Point& p, const Point& q,
                               const VerifyOptions& options = {});

struct PropertyRow {
  std::string name;
  int trials = 0;
  int passed = 0;
  int failed = 0;
  /// Smallest observed slack; a trial passes iff its slack >= threshold.
  double worst_slack = 0.0;
  double threshold = 0.0;
  double runtime_seconds = 0.0;
  std::string note;
};

struct SuiteReport {
  std::string spacetime;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<PropertyRow> rows;

  bool all_passed() const;
};

/// Seeded invariant checks across the modules. Properties that do not apply
/// to the spacetime (closed forms on conformally flat entries, witnesses in
/// dimension > 2) are reported with zero trials and a note.
SuiteReport property_suite(const Spacetime& s, std::uint64_t seed, int trials);

/// One CSV row per property, with a header.
void write_suite_csv(std::ostream& out, const SuiteReport& report);

}  // namespace lorentz
