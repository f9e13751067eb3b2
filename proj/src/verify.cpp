#include "lorentz/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "lorentz/error.hpp"

namespace lorentz {

namespace {

int baseline_resolution(int dim, int requested) {
  switch (dim) {
    case 2: return requested;
    case 3: return 21;
    default: return 11;
  }
}

double positive_part(double x) { return std::max(0.0, x); }

std::string eps_label(const std::string& kind, double eps) {
  std::ostringstream out;
  out << kind << " eps=" << eps;
  return out.str();
}

void require_schedule(const std::vector<double>& epsilons) {
  if (epsilons.empty()) throw Error(ErrorKind::PreconditionViolated, "epsilon schedule is empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) {
      throw Error(ErrorKind::PreconditionViolated, "epsilon schedule entries must be positive");
    }
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw Error(ErrorKind::PreconditionViolated, "epsilon schedule must be strictly decreasing");
    }
  }
}

std::string describe_rejection(const std::string& label, const AdmissibilityReport& r) {
  std::ostringstream out;
  out << label << " failed the admissibility re-check: ess_sup=" << r.ess_sup_estimate
      << " orientation_ok=" << r.orientation_ok << " violation_fraction=" << r.violation_fraction;
  return out.str();
}

}  // namespace

double affine_baseline_slope(const Spacetime& s, const GridSpec& box) {
  if (s.flat()) return 1.0;
  // sup of Omega over the box, from the shape of the factor.
  const ConformalFactor& f = s.factor();
  const auto [t_lo, t_hi] = box.box.at(0);
  const auto [x_lo, x_hi] = box.box.at(1);
  double sup = 1.0;
  switch (f.shape()) {
    case ConformalFactor::Shape::Constant: sup = f.param_a(); break;
    case ConformalFactor::Shape::TimeQuadratic:
      sup = f(std::max(std::abs(t_lo), std::abs(t_hi)), 0.0);
      break;
    case ConformalFactor::Shape::Bump: {
      if (f.param_a() <= 0.0) {
        sup = 1.0;
      } else {
        const double t = std::clamp(0.0, t_lo, t_hi);
        const double x = std::clamp(0.0, x_lo, x_hi);
        sup = f(t, x);
      }
      break;
    }
  }
  return std::max(1.0, sup);
}

VariationalResult variational_search(const Spacetime& s, const Point& p, const Point& q,
                                     const VerifyOptions& options) {
  require_schedule(options.epsilons);
  VariationalResult out;
  out.relation = classify_pair(s, p, q);
  if (out.relation == CausalRelation::Equal) {
    out.candidates.push_back({"equal points", std::nullopt, 0.0, 0.0, std::nullopt});
    return out;
  }

  // Affine baseline a t with a >= sup Omega.
  {
    const int res = baseline_resolution(s.dim(), options.witness.verification_resolution);
    const GridSpec box = verification_box(s, p, q, res, options.witness.verification_margin);
    const double a = affine_baseline_slope(s, box);
    const ScalarField f = affine_time_field(s.dim(), a);
    const AdmissibilityReport adm = check_admissible(s, f, box, options.tolerances);
    std::ostringstream label;
    label << "affine " << a << "*t";
    if (!adm.verdict) throw Error(ErrorKind::WitnessRejected, describe_rejection(label.str(), adm));
    const double diff = f(q) - f(p);
    out.candidates.push_back({label.str(), std::nullopt, diff, positive_part(diff), adm});
  }

  std::vector<WitnessField> witnesses;
  std::vector<std::size_t> witness_slot;
  auto admit = [&](WitnessField w, const std::string& label) {
    const AdmissibilityReport adm = check_admissible(s, w.field(), w.verification_box, options.tolerances);
    if (!adm.verdict) throw Error(ErrorKind::WitnessRejected, describe_rejection(label, adm));
    out.candidates.push_back({label, w.epsilon, w.value_difference, positive_part(w.value_difference), adm});
    witness_slot.push_back(out.candidates.size() - 1);
    witnesses.push_back(std::move(w));
  };

  try {
    if (is_future_type(out.relation)) {
      for (double eps : options.epsilons) {
        admit(build_equality_witness(s, p, q, eps, options.witness), eps_label("equality", eps));
      }
    } else if (is_past_type(out.relation)) {
      admit(build_reverse_witness(s, p, q, options.witness), "reverse");
    } else {
      for (double eps : options.epsilons) {
        admit(build_unrelated_witness(s, p, q, eps, options.witness), eps_label("unrelated", eps));
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unsupported) throw;
    out.notes.push_back(std::string("witness family unavailable: ") + e.what());
  }

  // Ties go to the later candidate, so a witness wins over the baseline.
  out.best = 0;
  for (std::size_t i = 1; i < out.candidates.size(); ++i) {
    if (out.candidates[i].value <= out.candidates[out.best].value) out.best = i;
  }
  out.value = out.candidates[out.best].value;
  for (std::size_t k = 0; k < witness_slot.size(); ++k) {
    if (witness_slot[k] == out.best) out.witness = std::move(witnesses[k]);
  }
  return out;
}

double variational_distance(const Spacetime& s, const Point& p, const Point& q,
                            const std::vector<double>& epsilons) {
  VerifyOptions options;
  options.epsilons = epsilons;
  return variational_search(s, p, q, options).value;
}

SandwichReport sandwich_report(const Spacetime& s, const Point& p, const Point& q, const VerifyOptions& options) {
  SandwichReport rep;
  rep.relation = classify_pair(s, p, q);
  rep.epsilons = options.epsilons;
  rep.estimate.closed_form = closed_form_distance(s, p, q);
  if (is_future_type(rep.relation)) {
    rep.path = max_path_search(s, p, q, options.path);
    rep.estimate.lower = rep.path->length;
  }
  rep.variational = variational_search(s, p, q, options);
  rep.estimate.upper = rep.variational.value;

  const double tol = options.tolerances.analytic;
  if (rep.estimate.closed_form) {
    rep.contracts.lower_below_closed_form = rep.estimate.lower - 1e-9 <= *rep.estimate.closed_form;
    rep.contracts.closed_form_below_upper = *rep.estimate.closed_form <= rep.estimate.upper + tol;
  }
  if (rep.relation == CausalRelation::Equal) {
    rep.contracts.case_contract = rep.estimate.lower == 0.0 && rep.estimate.upper == 0.0;
  } else if (is_future_type(rep.relation)) {
    rep.contracts.case_contract = rep.estimate.gap() >= -tol;
  } else {
    rep.contracts.case_contract = rep.estimate.upper < options.epsilons.back();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Property suite

bool SuiteReport::all_passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const PropertyRow& r) { return r.failed == 0; });
}

namespace {

using Rng = std::mt19937_64;

class Sampler {
 public:
  Sampler(const Spacetime& s, Rng& rng) : s_(s), rng_(rng) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Point point() {
    Vector c(s_.dim());
    c[0] = uniform(-2.0, 2.0);
    for (int i = 1; i < s_.dim(); ++i) c[i] = s_.periodic() ? uniform(0.0, s_.circumference()) : uniform(-2.0, 2.0);
    return s_.point(c);
  }

  // Uniform direction in the spatial slice.
  Vector direction() {
    const int n = s_.dim() - 1;
    Vector u(n);
    if (n == 1) {
      u[0] = uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
      return u;
    }
    std::normal_distribution<double> g;
    do {
      for (int i = 0; i < n; ++i) u[i] = g(rng_);
    } while (u.norm() < 1e-6);
    return u / u.norm();
  }

  // Future causal displacement (dt, dx) with |dx| <= speed * dt.
  Vector causal_step(double dt_lo, double dt_hi, double speed) {
    Vector d(s_.dim());
    d[0] = uniform(dt_lo, dt_hi);
    d.tail(s_.dim() - 1) = direction() * (d[0] * speed * uniform(0.0, 1.0));
    return d;
  }

  // Future timelike vector spanning nearly null to nearly static.
  Vector timelike() {
    Vector v(s_.dim());
    const double spatial = uniform(0.0, 2.0);
    v.tail(s_.dim() - 1) = direction() * spatial;
    v[0] = spatial * (1.0 + std::pow(10.0, -uniform(0.0, 6.0))) + 1e-3;
    return v;
  }

  Point shifted(const Point& x, const Vector& d) { return s_.point(Vector(x.coords + d)); }

 private:
  const Spacetime& s_;
  Rng& rng_;
};

struct PropertyContext {
  const Spacetime& s;
  Rng& rng;
  Sampler& sample;
  int trials;
};

// A property reports one slack per trial through the callback.
using Property = std::function<void(PropertyContext&, PropertyRow&, const std::function<void(double)>&)>;

PropertyRow run_property(const Spacetime& s, std::uint64_t seed, std::uint32_t index, int trials,
                         const std::string& name, double threshold, const Property& body) {
  PropertyRow row;
  row.name = name;
  row.threshold = threshold;
  row.worst_slack = std::numeric_limits<double>::infinity();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), index};
  Rng rng(seq);
  Sampler sampler(s, rng);
  PropertyContext ctx{s, rng, sampler, trials};
  const auto start = std::chrono::steady_clock::now();
  body(ctx, row, [&](double slack) {
    ++row.trials;
    if (slack >= threshold) {
      ++row.passed;
    } else {
      ++row.failed;
    }
    row.worst_slack = std::min(row.worst_slack, slack);
  });
  row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (row.trials == 0) row.worst_slack = std::numeric_limits<double>::quiet_NaN();
  return row;
}

bool witnesses_supported(const Spacetime& s) {
  return s.periodic() || (s.kind() == Spacetime::Kind::Minkowski && s.dim() == 2);
}

}  // namespace

SuiteReport property_suite(const Spacetime& s, std::uint64_t seed, int trials) {
  if (trials < 1) throw Error(ErrorKind::PreconditionViolated, "property suite needs trials >= 1");
  SuiteReport report;
  report.spacetime = s.name();
  report.seed = seed;
  report.trials = trials;
  const bool flat = s.flat();
  const std::optional<double> circ = s.periodic() ? std::optional<double>(s.circumference()) : std::nullopt;
  std::uint32_t index = 0;
  auto add = [&](const std::string& name, double threshold, const Property& body) {
    report.rows.push_back(run_property(s, seed, index++, trials, name, threshold, body));
  };
  auto skip = [&](PropertyRow& row, const std::string& why) { row.note = why; };

  add("inverse_cauchy_schwarz", -1e-12, [&](PropertyContext& c, PropertyRow&, auto&& record) {
    for (int k = 0; k < c.trials; ++k) {
      const Point x = c.sample.point();
      Vector v = c.sample.timelike();
      Vector w = c.sample.timelike();
      if (c.sample.uniform(0.0, 1.0) < 0.5) {
        v = -v;
        w = -w;
      }
      record(inverse_cauchy_schwarz_slack(c.s, x, {x, v}, {x, w}));
    }
  });

  add("inverse_triangle", -1e-9, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!flat) return skip(row, "no closed-form distance");
    for (int k = 0; k < c.trials; ++k) {
      const Point p = c.sample.point();
      const Point q = c.sample.shifted(p, c.sample.causal_step(0.0, 2.0, 1.0));
      const Point r = c.sample.shifted(q, c.sample.causal_step(0.0, 2.0, 1.0));
      record(inverse_triangle_slack(c.s, p, q, r));
    }
  });

  add("classify_matches_closed_form", 0.0, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!flat) return skip(row, "no closed-form distance");
    for (int k = 0; k < c.trials; ++k) {
      const Point p = c.sample.point();
      Point q = c.sample.point();
      // A quarter of the pairs sit exactly on the light cone.
      if (k % 4 == 0) {
        Vector d(c.s.dim());
        d[0] = 1.0;
        d.tail(c.s.dim() - 1) = c.sample.direction();
        q = c.sample.shifted(p, c.sample.uniform(0.1, 2.0) * d);
      }
      const bool chrono = classify_pair(c.s, p, q) == CausalRelation::ChronologicalFuture;
      const bool positive = exact_distance(c.s, p, q) > 0.0;
      record(chrono == positive ? 0.0 : -1.0);
    }
  });

  add("distance_monotone_along_causal_steps", -1e-12, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!flat) return skip(row, "no closed-form distance");
    for (int k = 0; k < c.trials; ++k) {
      const Point p = c.sample.point();
      const Point z1 = c.sample.shifted(p, c.sample.causal_step(0.0, 2.0, 1.5));
      const Point z2 = c.sample.shifted(z1, c.sample.causal_step(0.0, 1.0, 1.0));
      record(exact_distance(c.s, p, z2) - exact_distance(c.s, p, z1));
    }
  });

  auto eikonal_trial = [&](PropertyContext& c, bool finite_difference, auto&& record) {
    int done = 0;
    while (done < c.trials) {
      const Point base = c.sample.point();
      const Point z = c.sample.shifted(base, c.sample.causal_step(0.05, 3.0, 1.0));
      const double gap = distance_seam_gap(z.t() - base.t(), c.s.spatial_separation(base, z), circ);
      if (gap < 0.05) continue;
      ScalarField f = distance_field(c.s, base, DistanceDirection::FromBase);
      if (finite_difference) f = f.with_central_difference(1e-4);
      record(-std::abs(eikonal_value(c.s, f, z, 0.05) + 1.0));
      ++done;
    }
  };
  add("eikonal_distance_analytic", -1e-8, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!flat) return skip(row, "no closed-form distance");
    eikonal_trial(c, false, record);
  });
  add("eikonal_distance_central_difference", -1e-4, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!flat) return skip(row, "no closed-form distance");
    eikonal_trial(c, true, record);
  });

  add("gradient_cross_terms", -1e-12, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!flat) return skip(row, "no closed-form distance");
    int done = 0;
    while (done < c.trials) {
      const Point z = c.sample.point();
      const Point b1 = c.sample.shifted(z, -c.sample.causal_step(0.05, 3.0, 1.0));
      const Point b2 = c.sample.shifted(z, -c.sample.causal_step(0.05, 3.0, 1.0));
      auto g1 = distance_gradient(c.s, b1, z, DistanceDirection::FromBase);
      auto g2 = distance_gradient(c.s, b2, z, DistanceDirection::FromBase);
      if (!g1 || !g2) continue;
      const TangentVector v1 = raise_gradient(c.s, z, *g1);
      const TangentVector v2 = raise_gradient(c.s, z, *g2);
      record(-inner(c.s, z, v1, v2));
      ++done;
    }
  });

  add("path_search_below_closed_form", -1e-9, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!flat) return skip(row, "no closed-form distance");
    for (int k = 0; k < c.trials; ++k) {
      const Point p = c.sample.point();
      const Point q = c.sample.shifted(p, c.sample.causal_step(0.1, 3.0, 0.95));
      PathSearchOptions opt;
      opt.segments = 4;
      opt.restarts = 2;
      opt.seed = static_cast<std::uint64_t>(k);
      record(exact_distance(c.s, p, q) - max_path_search(c.s, p, q, opt).length);
    }
  });

  add("covering_witness_checklist", 0.0, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!witnesses_supported(c.s)) return skip(row, "covering witnesses need FlatCylinder or Minkowski(2)");
    CoveringOptions opt;
    if (!c.s.periodic()) opt.extent = std::make_pair(-3.0, 3.0);
    for (int k = 0; k < c.trials; ++k) {
      const double tau = c.sample.uniform(-1.0, 1.0);
      const bool above = c.sample.uniform(0.0, 1.0) < 0.5;
      const double sigma = above ? 1.0 : -1.0;
      const double x = c.s.periodic() ? c.sample.uniform(0.0, c.s.circumference()) : c.sample.uniform(-1.0, 1.0);
      const Point q = c.s.point({tau + sigma * c.sample.uniform(0.0, 0.5), x});
      const Point guard = c.s.point({q.t() + sigma * c.sample.uniform(0.2, 0.5), x});
      const CoveringWitness w = build_covering_witness(c.s, {tau}, above ? CoverSide::Above : CoverSide::Below,
                                                       {q}, {guard}, opt);
      record(w.verify(c.s, 200, static_cast<std::uint64_t>(k) + 1).all() ? 0.0 : -1.0);
    }
  });

  add("lower_bound_soundness", -1e-6, [&](PropertyContext& c, PropertyRow& row, auto&& record) {
    if (!flat) return skip(row, "no closed-form distance");
    struct Member {
      ScalarField field;
      GridSpec box;
    };
    std::vector<Member> library;
    const Point o = c.s.point(Vector::Zero(c.s.dim()));
    {
      Vector far = Vector::Zero(c.s.dim());
      far[0] = 2.0;
      const GridSpec box = verification_box(c.s, o, c.s.point(far), baseline_resolution(c.s.dim(), 41), 1.0);
      library.push_back({affine_time_field(c.s.dim(), 1.0), box});
      library.push_back({affine_time_field(c.s.dim(), 1.5, 0.25), box});
    }
    if (witnesses_supported(c.s)) {
      WitnessOptions wopt;
      const Point a = c.s.point({0.0, 0.5});
      const Point b = c.s.point({1.0, 0.8});
      const Point u = c.s.point({0.3, 2.0});
      for (WitnessField w : {build_equality_witness(c.s, a, b, 0.05, wopt), build_reverse_witness(c.s, b, a, wopt),
                             build_unrelated_witness(c.s, a, u, 0.05, wopt)}) {
        library.push_back({w.field(), w.verification_box});
      }
    } else {
      row.note = "affine members only";
    }
    for (const Member& m : library) {
      const AdmissibilityReport adm = check_admissible(c.s, m.field, m.box);
      if (!adm.verdict) throw Error(ErrorKind::WitnessRejected, describe_rejection(m.field.description(), adm));
    }
    for (int k = 0; k < c.trials; ++k) {
      const Member& m = library[static_cast<std::size_t>(k) % library.size()];
      // Pairs inside the certified box; maximizing segments stay inside too.
      auto inside = [&] {
        Vector x(c.s.dim());
        for (int i = 0; i < c.s.dim(); ++i) x[i] = c.sample.uniform(m.box.box[i].first, m.box.box[i].second);
        return x;
      };
      Point p = c.s.point(inside());
      Point q = c.s.point(inside());
      if (!is_future_type(classify_pair(c.s, p, q))) {
        if (is_future_type(classify_pair(c.s, q, p))) {
          std::swap(p, q);
        } else {
          --k;
          continue;
        }
      }
      record(lower_bound_slack(c.s, m.field, p, q));
    }
  });

  return report;
}

void write_suite_csv(std::ostream& out, const SuiteReport& report) {
  out << "property,spacetime,seed,trials,passed,failed,worst_slack,threshold,runtime_seconds,note\n";
  out << std::setprecision(17);
  for (const PropertyRow& r : report.rows) {
    out << r.name << ",\"" << report.spacetime << "\"," << report.seed << ',' << r.trials << ',' << r.passed << ','
        << r.failed << ',';
    if (!std::isnan(r.worst_slack)) out << r.worst_slack;
    out << ',' << r.threshold << ',' << r.runtime_seconds << ",\"" << r.note << "\"\n";
  }
}

}  // namespace lorentz
