#include "lorentz/report.hpp"

#include <bit>
#include <cmath>

namespace lorentz {

namespace {

// NaN and infinities have no JSON literal; they are written as strings.
Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json optional_number(const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); }

Json points(const std::vector<Point>& xs) {
  Json out = Json::array();
  for (const Point& x : xs) out.push_back(to_json(x));
  return out;
}

Json numbers(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

}  // namespace

Json to_json(const Point& x) {
  Json out = Json::array();
  for (int i = 0; i < x.dim(); ++i) out.push_back(number(x[i]));
  return out;
}

Json to_json(const AdmissibilityReport& r) {
  return {{"verdict", r.verdict},
          {"ess_sup_estimate", number(r.ess_sup_estimate)},
          {"orientation_ok", r.orientation_ok},
          {"violation_fraction", number(r.violation_fraction)},
          {"tolerance", number(r.tolerance)},
          {"trim_fraction", number(r.trim_fraction)},
          {"total_samples", r.total_samples},
          {"kept_samples", r.kept_samples},
          {"excluded_samples", r.excluded_samples},
          {"trimmed_samples", r.trimmed_samples}};
}

Json to_json(const GridSpec& g) {
  Json box = Json::array();
  for (const auto& [lo, hi] : g.box) box.push_back({number(lo), number(hi)});
  return {{"box", box}, {"resolution", g.resolution}, {"exclusion_radius", number(g.exclusion_radius)}};
}

Json to_json(const PathSearchResult& r) {
  return {{"length", number(r.length)},
          {"restart_lengths", numbers(r.restart_lengths)},
          {"evaluations", r.evaluations},
          {"best_curve", points(r.best.nodes)}};
}

Json to_json(const CoveringWitness& w) {
  Json domain = w.domain.periodic ? Json{{"circle", number(w.domain.circumference)}}
                                  : Json{{"segment", {number(w.domain.lo), number(w.domain.hi)}}};
  return {{"surface_level", number(w.surface.level)},
          {"side", to_string(w.side)},
          {"excluded", points(w.excluded)},
          {"guards", points(w.guards)},
          {"depth", number(w.depth)},
          {"step", number(w.step)},
          {"r_max", number(w.r_max)},
          {"allowed_arcs", w.allowed_arcs},
          {"domain", domain},
          {"coverage_certified", w.certificate.covered},
          {"generator_count", w.generators.size()},
          {"generators", points(w.generators)}};
}

Json to_json(const CoveringChecklist& c) {
  return {{"all", c.all()},
          {"generators_strictly_off_surface", c.generators_strictly_off_surface},
          {"generators_outside_excluded", c.generators_outside_excluded},
          {"diameters_below_r_max", c.diameters_below_r_max},
          {"coverage_certified", c.coverage_certified},
          {"zero_on_excluded", c.zero_on_excluded},
          {"positive_on_future", c.positive_on_future},
          {"zero_samples", c.zero_samples},
          {"positive_samples", c.positive_samples}};
}

Json to_json(const WitnessField& w) {
  Json aux = Json::object();
  for (const NamedPoint& a : w.auxiliary) aux[a.name] = to_json(a.point);
  return {{"case", to_string(w.kind)},
          {"description", w.field().description()},
          {"p", to_json(w.p)},
          {"q", to_json(w.q)},
          {"epsilon", number(w.epsilon)},
          {"roles_swapped", w.roles_swapped},
          {"auxiliary", aux},
          {"offsets_tried", numbers(w.offsets_tried)},
          {"f_p", number(w.f_p)},
          {"f_q", number(w.f_q)},
          {"value_difference", number(w.value_difference)},
          {"verification_box", to_json(w.verification_box)},
          {"f1", w.upper ? to_json(*w.upper) : Json(nullptr)},
          {"f2", w.lower ? to_json(*w.lower) : Json(nullptr)}};
}

Json to_json(const VariationalResult& r) {
  Json cands = Json::array();
  for (const Candidate& c : r.candidates) {
    cands.push_back({{"label", c.label},
                     {"epsilon", optional_number(c.epsilon)},
                     {"difference", number(c.difference)},
                     {"value", number(c.value)},
                     {"admissibility", c.admissibility ? to_json(*c.admissibility) : Json(nullptr)}});
  }
  return {{"relation", to_string(r.relation)},
          {"value", number(r.value)},
          {"best", r.best},
          {"candidates", cands},
          {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)},
          {"notes", r.notes}};
}

Json to_json(const SandwichReport& r) {
  const auto& best = r.variational.candidates.at(r.variational.best);
  return {{"relation", to_string(r.relation)},
          {"closed_form", optional_number(r.estimate.closed_form)},
          {"lower", number(r.estimate.lower)},
          {"upper", number(r.estimate.upper)},
          {"gap", number(r.estimate.gap())},
          {"epsilons", numbers(r.epsilons)},
          {"contracts",
           {{"all", r.contracts.all()},
            {"lower_below_closed_form", r.contracts.lower_below_closed_form},
            {"closed_form_below_upper", r.contracts.closed_form_below_upper},
            {"case_contract", r.contracts.case_contract}}},
          {"witness_used", best.label},
          {"admissibility", best.admissibility ? to_json(*best.admissibility) : Json(nullptr)},
          {"path_search", r.path ? to_json(*r.path) : Json(nullptr)},
          {"variational", to_json(r.variational)}};
}

Json to_json(const SuiteReport& r) {
  Json rows = Json::array();
  for (const PropertyRow& row : r.rows) {
    rows.push_back({{"property", row.name},
                    {"trials", row.trials},
                    {"passed", row.passed},
                    {"failed", row.failed},
                    {"worst_slack", number(row.worst_slack)},
                    {"threshold", number(row.threshold)},
                    {"note", row.note}});
  }
  return {{"spacetime", r.spacetime}, {"seed", r.seed}, {"trials", r.trials}, {"all_passed", r.all_passed()},
          {"properties", rows}};
}

Json suite_timing(const SuiteReport& r) {
  Json out = Json::object();
  for (const PropertyRow& row : r.rows) out[row.name] = row.runtime_seconds;
  return out;
}

std::string first_difference(const Json& a, const Json& b) {
  auto walk = [](auto&& self, const Json& x, const Json& y, const std::string& at) -> std::string {
    if (x.type() != y.type()) {
      // 2 and 2.0 may parse to different JSON number kinds; compare values.
      if (x.is_number() && y.is_number()) {
        return std::bit_cast<std::uint64_t>(x.get<double>()) == std::bit_cast<std::uint64_t>(y.get<double>())
                   ? std::string()
                   : at.empty() ? "/" : at;
      }
      return at.empty() ? "/" : at;
    }
    if (x.is_object()) {
      if (x.size() != y.size()) return at.empty() ? "/" : at;
      for (auto it = x.begin(); it != x.end(); ++it) {
        if (!y.contains(it.key())) return at + "/" + it.key();
        std::string d = self(self, it.value(), y.at(it.key()), at + "/" + it.key());
        if (!d.empty()) return d;
      }
      return {};
    }
    if (x.is_array()) {
      if (x.size() != y.size()) return at.empty() ? "/" : at;
      for (std::size_t i = 0; i < x.size(); ++i) {
        std::string d = self(self, x[i], y[i], at + "/" + std::to_string(i));
        if (!d.empty()) return d;
      }
      return {};
    }
    if (x.is_number_float()) {
      return std::bit_cast<std::uint64_t>(x.get<double>()) == std::bit_cast<std::uint64_t>(y.get<double>())
                 ? std::string()
                 : (at.empty() ? "/" : at);
    }
    return x == y ? std::string() : (at.empty() ? "/" : at);
  };
  return walk(walk, a, b, "");
}

}  // namespace lorentz
