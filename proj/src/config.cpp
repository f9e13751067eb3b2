#include "lorentz/config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <regex>
#include <sstream>

#include "lorentz/error.hpp"
#include "lorentz/verify.hpp"

namespace lorentz {

std::string to_string(Command c) {
  switch (c) {
    case Command::Distance: return "distance";
    case Command::Admissible: return "admissible";
    case Command::Witness: return "witness";
    case Command::Sandwich: return "sandwich";
    case Command::Suite: return "suite";
  }
  return "?";
}

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

// An object whose keys must come from a fixed list.
class Section {
 public:
  Section(const Json& j, std::string where, std::initializer_list<const char*> allowed)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) config_error(where_ + " must be a JSON object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
      if (!known) config_error("unknown key '" + it.key() + "' in " + where_);
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const Json& at(const char* key) const {
    if (!has(key)) config_error("missing key '" + std::string(key) + "' in " + where_);
    return j_.at(key);
  }
  std::string name(const char* key) const { return where_ + "." + key; }

  double number(const char* key, double fallback) const { return has(key) ? as_number(at(key), name(key)) : fallback; }
  double number(const char* key) const { return as_number(at(key), name(key)); }

  long integer(const char* key, long fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_number_integer()) config_error(name(key) + " must be an integer");
    return v.get<long>();
  }

  std::string text(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_string()) config_error(name(key) + " must be a string");
    return v.get<std::string>();
  }

  static double as_number(const Json& v, const std::string& where) {
    if (!v.is_number()) config_error(where + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) config_error(where + " must be finite");
    return x;
  }

 private:
  const Json& j_;
  std::string where_;
};

std::vector<double> number_list(const Json& v, const std::string& where) {
  if (!v.is_array()) config_error(where + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Section::as_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Json numbers_json(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(x);
  return out;
}

Point parse_point(const Spacetime& s, const Json& v, const std::string& where) {
  const std::vector<double> c = number_list(v, where);
  if (static_cast<int>(c.size()) != s.dim()) {
    config_error(where + " must have " + std::to_string(s.dim()) + " coordinates");
  }
  Vector coords(s.dim());
  for (int i = 0; i < s.dim(); ++i) coords[i] = c[static_cast<std::size_t>(i)];
  try {
    return s.point(coords);
  } catch (const Error& e) {
    config_error(where + ": " + e.what());
  }
}

std::vector<Point> parse_points(const Spacetime& s, const Json& v, const std::string& where) {
  if (!v.is_array()) config_error(where + " must be an array of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_point(s, v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Spacetime parse_spacetime(const Json& j, Json& norm) {
  Section sec(j, "spacetime", {"kind", "dim", "circumference", "factor", "null_tolerance"});
  const std::string kind = sec.text("kind", "");
  try {
    Spacetime s = Spacetime::minkowski(2);
    if (kind == "minkowski") {
      if (sec.has("circumference") || sec.has("factor")) config_error("minkowski takes only dim");
      const long dim = sec.integer("dim", 2);
      s = Spacetime::minkowski(static_cast<int>(dim));
      norm = {{"kind", kind}, {"dim", dim}};
    } else if (kind == "flat_cylinder") {
      if (sec.has("dim") || sec.has("factor")) config_error("flat_cylinder takes only circumference");
      const double c = sec.number("circumference", kTwoPi);
      s = Spacetime::flat_cylinder(c);
      norm = {{"kind", kind}, {"circumference", c}};
    } else if (kind == "conformally_flat") {
      if (sec.has("dim") || sec.has("circumference")) config_error("conformally_flat takes only factor");
      Section f(sec.at("factor"), "spacetime.factor", {"shape", "c", "a", "b", "amplitude", "width"});
      const std::string shape = f.text("shape", "");
      if (shape == "constant") {
        const double c = f.number("c");
        s = Spacetime::conformally_flat(ConformalFactor::constant(c));
        norm = {{"kind", kind}, {"factor", {{"shape", shape}, {"c", c}}}};
      } else if (shape == "time_quadratic") {
        const double a = f.number("a");
        const double b = f.number("b");
        s = Spacetime::conformally_flat(ConformalFactor::time_quadratic(a, b));
        norm = {{"kind", kind}, {"factor", {{"shape", shape}, {"a", a}, {"b", b}}}};
      } else if (shape == "bump") {
        const double amp = f.number("amplitude");
        const double w = f.number("width");
        s = Spacetime::conformally_flat(ConformalFactor::bump(amp, w));
        norm = {{"kind", kind}, {"factor", {{"shape", shape}, {"amplitude", amp}, {"width", w}}}};
      } else {
        config_error("spacetime.factor.shape must be constant, time_quadratic or bump");
      }
    } else {
      config_error("spacetime.kind must be minkowski, flat_cylinder or conformally_flat");
    }
    const double tol = sec.number("null_tolerance", kDefaultNullTolerance);
    if (!(tol >= 0.0)) config_error("spacetime.null_tolerance must be >= 0");
    norm["null_tolerance"] = tol;
    return s.with_null_tolerance(tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error(std::string("spacetime: ") + e.what());
  }
}

GridSpec parse_grid(const Json& j, int dim, Json& norm) {
  Section sec(j, "grid", {"box", "resolution", "exclusion_radius"});
  GridSpec g;
  const Json& box = sec.at("box");
  if (!box.is_array() || static_cast<int>(box.size()) != dim) {
    config_error("grid.box must list one [lo, hi] pair per coordinate");
  }
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto pair = number_list(box[i], "grid.box[" + std::to_string(i) + "]");
    if (pair.size() != 2 || !(pair[1] > pair[0])) config_error("grid.box entries must be [lo, hi] with lo < hi");
    g.box.emplace_back(pair[0], pair[1]);
  }
  const Json& res = sec.at("resolution");
  if (res.is_number_integer()) {
    g.resolution.assign(static_cast<std::size_t>(dim), res.get<int>());
  } else if (res.is_array() && static_cast<int>(res.size()) == dim) {
    for (const Json& r : res) {
      if (!r.is_number_integer()) config_error("grid.resolution entries must be integers");
      g.resolution.push_back(r.get<int>());
    }
  } else {
    config_error("grid.resolution must be an integer or one integer per coordinate");
  }
  if (std::any_of(g.resolution.begin(), g.resolution.end(), [](int r) { return r < 2; })) {
    config_error("grid.resolution must be >= 2");
  }
  g.exclusion_radius = sec.number("exclusion_radius", 0.0);
  norm = to_json(g);
  return g;
}

std::optional<std::string> optional_text(const Section& sec, const char* key) {
  if (!sec.has(key)) return std::nullopt;
  return sec.text(key, "");
}

RunConfig parse_plain(const Json& doc) {
  Section top(doc, "config",
              {"command", "spacetime", "points", "epsilons", "grid", "budget", "seed", "trials", "field", "gradient",
               "tolerances", "witness", "output"});
  RunConfig cfg;
  Json& norm = cfg.normalized;
  norm = Json::object();

  const std::string command = top.text("command", "");
  if (command == "distance") {
    cfg.command = Command::Distance;
  } else if (command == "admissible") {
    cfg.command = Command::Admissible;
  } else if (command == "witness") {
    cfg.command = Command::Witness;
  } else if (command == "sandwich") {
    cfg.command = Command::Sandwich;
  } else if (command == "suite") {
    cfg.command = Command::Suite;
  } else {
    config_error("command must be one of distance, admissible, witness, sandwich, suite");
  }
  norm["command"] = command;

  Json st;
  cfg.spacetime = parse_spacetime(top.at("spacetime"), st);
  norm["spacetime"] = st;
  const Spacetime& s = cfg.spacetime;

  if (top.has("points")) {
    Section pts(top.at("points"), "points", {"p", "q"});
    Json pn = Json::object();
    if (pts.has("p")) {
      cfg.p = parse_point(s, pts.at("p"), "points.p");
      pn["p"] = pts.at("p");
    }
    if (pts.has("q")) {
      cfg.q = parse_point(s, pts.at("q"), "points.q");
      pn["q"] = pts.at("q");
    }
    norm["points"] = pn;
  }

  if (top.has("epsilons")) cfg.epsilons = number_list(top.at("epsilons"), "epsilons");
  if (cfg.epsilons.empty()) config_error("epsilons must not be empty");
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (!(cfg.epsilons[i] > 0.0) || (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))) {
      config_error("epsilons must be positive and strictly decreasing");
    }
  }
  norm["epsilons"] = numbers_json(cfg.epsilons);

  if (top.has("grid")) {
    Json g;
    cfg.grid = parse_grid(top.at("grid"), s.dim(), g);
    norm["grid"] = g;
  }

  {
    const Json empty = Json::object();
    Section b(top.has("budget") ? top.at("budget") : empty, "budget",
              {"segments", "restarts", "quadrature", "max_sweeps"});
    cfg.budget.segments = static_cast<int>(b.integer("segments", 8));
    cfg.budget.restarts = static_cast<int>(b.integer("restarts", 20));
    cfg.budget.quadrature_n = static_cast<int>(b.integer("quadrature", kDefaultQuadrature));
    cfg.budget.max_sweeps = static_cast<int>(b.integer("max_sweeps", 20000));
    if (cfg.budget.segments < 1 || cfg.budget.restarts < 1 || cfg.budget.quadrature_n < 1 || cfg.budget.max_sweeps < 1) {
      config_error("budget entries must be >= 1");
    }
    norm["budget"] = {{"segments", cfg.budget.segments},
                      {"restarts", cfg.budget.restarts},
                      {"quadrature", cfg.budget.quadrature_n},
                      {"max_sweeps", cfg.budget.max_sweeps}};
  }

  if (top.has("seed")) {
    const Json& v = top.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      config_error("seed must be a non-negative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  cfg.budget.seed = cfg.seed;
  norm["seed"] = cfg.seed;

  cfg.trials = static_cast<int>(top.integer("trials", 100));
  if (cfg.trials < 1) config_error("trials must be >= 1");
  norm["trials"] = cfg.trials;

  cfg.field = top.text("field", "");
  norm["field"] = cfg.field;

  {
    const Json empty = Json::object();
    Section g(top.has("gradient") ? top.at("gradient") : empty, "gradient", {"mode", "h"});
    const std::string mode = g.text("mode", "analytic");
    if (mode == "analytic") {
      cfg.gradient = GradientMode::Analytic;
    } else if (mode == "central_difference") {
      cfg.gradient = GradientMode::CentralDifference;
    } else {
      config_error("gradient.mode must be analytic or central_difference");
    }
    cfg.fd_step = g.number("h", 1e-4);
    if (!(cfg.fd_step > 0.0)) config_error("gradient.h must be positive");
    norm["gradient"] = {{"mode", mode}, {"h", cfg.fd_step}};
  }

  {
    const Json empty = Json::object();
    Section t(top.has("tolerances") ? top.at("tolerances") : empty, "tolerances",
              {"analytic", "finite_difference", "trim_fraction"});
    cfg.tolerances.analytic = t.number("analytic", 1e-6);
    cfg.tolerances.finite_difference = t.number("finite_difference", 1e-3);
    cfg.tolerances.trim_fraction = t.number("trim_fraction", 0.02);
    if (!(cfg.tolerances.analytic >= 0.0) || !(cfg.tolerances.finite_difference >= 0.0) ||
        !(cfg.tolerances.trim_fraction >= 0.0 && cfg.tolerances.trim_fraction < 1.0)) {
      config_error("tolerances must be >= 0 and trim_fraction in [0, 1)");
    }
    norm["tolerances"] = {{"analytic", cfg.tolerances.analytic},
                          {"finite_difference", cfg.tolerances.finite_difference},
                          {"trim_fraction", cfg.tolerances.trim_fraction}};
  }

  {
    const Json empty = Json::object();
    Section w(top.has("witness") ? top.at("witness") : empty, "witness",
              {"case", "epsilon", "depth", "r_max", "overlap", "min_depth", "extent", "initial_offset", "min_offset",
               "verification_resolution", "verification_margin", "surface", "side", "excluded", "guards", "samples"});
    WitnessSpec& ws = cfg.witness;
    ws.kind = w.text("case", "equality");
    if (ws.kind != "equality" && ws.kind != "reverse" && ws.kind != "unrelated" && ws.kind != "covering") {
      config_error("witness.case must be equality, reverse, unrelated or covering");
    }
    ws.epsilon = w.number("epsilon", 0.01);
    if (!(ws.epsilon > 0.0)) config_error("witness.epsilon must be positive");
    CoveringOptions& cov = ws.options.covering;
    cov.depth = w.number("depth", cov.depth);
    cov.r_max = w.number("r_max", cov.r_max);
    cov.overlap = w.number("overlap", cov.overlap);
    cov.min_depth = w.number("min_depth", cov.min_depth);
    Json norm_w = {{"case", ws.kind}, {"epsilon", ws.epsilon}, {"depth", cov.depth}, {"r_max", cov.r_max},
                   {"overlap", cov.overlap}, {"min_depth", cov.min_depth}};
    if (w.has("extent")) {
      const auto e = number_list(w.at("extent"), "witness.extent");
      if (e.size() != 2 || !(e[1] > e[0])) config_error("witness.extent must be [lo, hi] with lo < hi");
      cov.extent = std::make_pair(e[0], e[1]);
      norm_w["extent"] = numbers_json(e);
    }
    ws.options.initial_offset = w.number("initial_offset", ws.options.initial_offset);
    ws.options.min_offset = w.number("min_offset", ws.options.min_offset);
    ws.options.verification_resolution =
        static_cast<int>(w.integer("verification_resolution", ws.options.verification_resolution));
    ws.options.verification_margin = w.number("verification_margin", ws.options.verification_margin);
    if (!(ws.options.initial_offset > 0.0) || !(ws.options.min_offset > 0.0) ||
        ws.options.verification_resolution < 2 || !(ws.options.verification_margin > 0.0)) {
      config_error("witness offsets and verification margin must be positive, resolution >= 2");
    }
    norm_w["initial_offset"] = ws.options.initial_offset;
    norm_w["min_offset"] = ws.options.min_offset;
    norm_w["verification_resolution"] = ws.options.verification_resolution;
    norm_w["verification_margin"] = ws.options.verification_margin;
    if (ws.kind == "covering") {
      ws.surface = w.number("surface");
      const std::string side = w.text("side", "above");
      if (side != "above" && side != "below") config_error("witness.side must be above or below");
      ws.side = side == "above" ? CoverSide::Above : CoverSide::Below;
      ws.excluded = parse_points(s, w.at("excluded"), "witness.excluded");
      ws.guards = parse_points(s, w.at("guards"), "witness.guards");
      ws.samples = static_cast<int>(w.integer("samples", 200));
      if (ws.samples < 1) config_error("witness.samples must be >= 1");
      norm_w["surface"] = ws.surface;
      norm_w["side"] = side;
      norm_w["excluded"] = w.at("excluded");
      norm_w["guards"] = w.at("guards");
      norm_w["samples"] = ws.samples;
    }
    norm["witness"] = norm_w;
  }

  {
    const Json empty = Json::object();
    Section o(top.has("output") ? top.at("output") : empty, "output", {"dir", "report", "grid_csv", "suite_csv"});
    cfg.output.dir = o.text("dir", ".");
    cfg.output.report = o.text("report", "report.json");
    cfg.output.grid_csv = optional_text(o, "grid_csv");
    cfg.output.suite_csv = optional_text(o, "suite_csv");
    // The directory is where this run happens to write; it is not part of
    // what a replay must reproduce, so it stays out of the normalized config.
    Json on = {{"report", cfg.output.report}};
    on["grid_csv"] = cfg.output.grid_csv ? Json(*cfg.output.grid_csv) : Json(nullptr);
    on["suite_csv"] = cfg.output.suite_csv ? Json(*cfg.output.suite_csv) : Json(nullptr);
    norm["output"] = on;
  }

  // Command-level requirements.
  const bool pair_needed = cfg.command == Command::Distance || cfg.command == Command::Sandwich ||
                           (cfg.command == Command::Witness && cfg.witness.kind != "covering");
  if (pair_needed && (!cfg.p || !cfg.q)) config_error("command " + command + " needs points.p and points.q");
  if (cfg.command == Command::Admissible) {
    if (cfg.field.empty()) config_error("command admissible needs a field");
    if (!cfg.grid && cfg.field != "witness") config_error("command admissible needs a grid for field " + cfg.field);
  }
  return cfg;
}

}  // namespace

RunConfig parse_config(const Json& document) {
  if (document.is_object() && document.contains("schema_version")) {
    Section rep(document, "report", {"schema_version", "tool", "command", "config", "status", "result", "timing",
                                     "replay", "files"});
    if (!rep.at("schema_version").is_number_integer() || rep.at("schema_version").get<int>() != kSchemaVersion) {
      config_error("unsupported report schema_version");
    }
    RunConfig cfg = parse_plain(rep.at("config"));
    if (rep.has("result")) cfg.expected_result = rep.at("result");
    return cfg;
  }
  return parse_plain(document);
}

// ---------------------------------------------------------------------------
// Execution

namespace {

struct FieldChoice {
  ScalarField field;
  std::optional<GridSpec> default_box;
  Json detail;
};

std::optional<std::pair<double, double>> parse_affine(const std::string& text) {
  static const std::regex pattern(
      R"(^\s*(?:([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*\*\s*|([-+])\s*)?t\s*(?:([-+])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return std::nullopt;
  double a = 1.0;
  if (m[1].matched) a = std::stod(m[1].str());
  if (m[2].matched && m[2].str() == "-") a = -1.0;
  double b = 0.0;
  if (m[4].matched) b = std::stod(m[4].str()) * (m[3].str() == "-" ? -1.0 : 1.0);
  return std::make_pair(a, b);
}

GridSpec covering_box(const Spacetime& s, const CoveringWitness& w, int resolution) {
  GridSpec g;
  const double tau = w.surface.level;
  g.box.push_back(w.side == CoverSide::Above ? std::make_pair(tau, tau + 2.0) : std::make_pair(tau - 2.0, tau));
  g.box.push_back(s.periodic() ? std::make_pair(0.0, s.circumference()) : std::make_pair(w.domain.lo, w.domain.hi));
  g.resolution = {resolution, resolution};
  return g;
}

struct WitnessBuild {
  std::optional<WitnessField> field;
  std::optional<CoveringWitness> covering;
};

WitnessBuild build_witness(const RunConfig& cfg) {
  const Spacetime& s = cfg.spacetime;
  const WitnessSpec& ws = cfg.witness;
  WitnessBuild out;
  if (ws.kind == "covering") {
    out.covering = build_covering_witness(s, {ws.surface}, ws.side, ws.excluded, ws.guards, ws.options.covering);
    return out;
  }
  if (!cfg.p || !cfg.q) config_error("witness fields need points.p and points.q");
  if (ws.kind == "equality") {
    out.field = build_equality_witness(s, *cfg.p, *cfg.q, ws.epsilon, ws.options);
  } else if (ws.kind == "reverse") {
    out.field = build_reverse_witness(s, *cfg.p, *cfg.q, ws.options);
  } else {
    out.field = build_unrelated_witness(s, *cfg.p, *cfg.q, ws.epsilon, ws.options);
  }
  return out;
}

FieldChoice choose_field(const RunConfig& cfg) {
  const Spacetime& s = cfg.spacetime;
  const std::string& name = cfg.field;
  if (auto affine = parse_affine(name)) {
    return {affine_time_field(s.dim(), affine->first, affine->second), std::nullopt,
            {{"kind", "affine"}, {"a", affine->first}, {"b", affine->second}}};
  }
  auto base = [&](char which) -> const Point& {
    const auto& pt = which == 'p' ? cfg.p : cfg.q;
    if (!pt) config_error(std::string("field ") + name + " needs points." + which);
    return *pt;
  };
  if (name == "d(p,.)" || name == "d(q,.)") {
    return {distance_field(s, base(name[2]), DistanceDirection::FromBase), std::nullopt, {{"kind", "distance"}}};
  }
  if (name == "d(.,p)" || name == "d(.,q)") {
    return {distance_field(s, base(name[4]), DistanceDirection::ToBase), std::nullopt, {{"kind", "distance"}}};
  }
  if (name == "witness") {
    WitnessBuild w = build_witness(cfg);
    if (w.covering) {
      return {w.covering->field(), covering_box(s, *w.covering, cfg.witness.options.verification_resolution),
              {{"kind", "covering"}, {"covering", to_json(*w.covering)}}};
    }
    return {w.field->field(), w.field->verification_box, {{"kind", "witness"}, {"witness", to_json(*w.field)}}};
  }
  config_error("unknown field '" + name + "': use a*t+b, d(p,.), d(.,p), d(q,.), d(.,q) or witness");
}

std::string violation_text(const AdmissibilityReport& r) {
  std::ostringstream out;
  out.precision(17);
  if (r.ess_sup_estimate > -1.0 + r.tolerance) {
    out << "eikonal condition violated: ess sup g(grad f, grad f) = " << r.ess_sup_estimate << " > -1 + "
        << r.tolerance;
  } else if (!r.orientation_ok) {
    out << "gradient is not past directed causal on the kept samples";
  } else if (r.violation_fraction > r.trim_fraction) {
    out << "violating fraction " << r.violation_fraction << " exceeds the trim fraction " << r.trim_fraction;
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text, RunOutcome& outcome) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  f << text;
  outcome.written.push_back(path);
}

struct CommandResult {
  Json result;
  bool contracts_held = true;
  Json timing = Json::object();
  std::optional<std::string> grid_csv;
  std::optional<std::string> suite_csv;
};

std::string grid_csv_text(const std::vector<GridSample>& samples) {
  std::ostringstream out;
  write_grid_csv(out, samples);
  return out.str();
}

CommandResult run_distance(const RunConfig& cfg) {
  const Spacetime& s = cfg.spacetime;
  CommandResult out;
  const CausalRelation rel = classify_pair(s, *cfg.p, *cfg.q);
  const auto cf = closed_form_distance(s, *cfg.p, *cfg.q);
  out.result = {{"relation", to_string(rel)}, {"closed_form", cf ? Json(*cf) : Json(nullptr)}};
  if (is_future_type(rel)) {
    const PathSearchResult path = max_path_search(s, *cfg.p, *cfg.q, cfg.budget);
    out.result["lower"] = path.length;
    out.result["path_search"] = to_json(path);
    if (cf) out.contracts_held = path.length <= *cf + 1e-9;
  } else {
    out.result["lower"] = 0.0;
    out.result["path_search"] = nullptr;
  }
  out.result["contracts"] = {{"path_below_closed_form", out.contracts_held}};
  return out;
}

CommandResult run_admissible(const RunConfig& cfg) {
  const Spacetime& s = cfg.spacetime;
  CommandResult out;
  FieldChoice choice = choose_field(cfg);
  ScalarField f = choice.field;
  if (cfg.gradient == GradientMode::CentralDifference) f = f.with_central_difference(cfg.fd_step);
  const GridSpec grid = cfg.grid ? *cfg.grid : *choice.default_box;
  const std::vector<GridSample> samples = sample_grid(s, f, grid);
  const AdmissibilityReport adm =
      summarize_admissibility(samples, cfg.tolerances.for_mode(f.mode()), cfg.tolerances.trim_fraction);
  out.contracts_held = adm.verdict;
  out.result = {{"field", f.description()},
                {"field_detail", choice.detail},
                {"gradient_mode", f.mode() == GradientMode::Analytic ? "analytic" : "central_difference"},
                {"grid", to_json(grid)},
                {"admissibility", to_json(adm)}};
  out.result["violation"] = adm.verdict ? Json(nullptr) : Json(violation_text(adm));
  if (cfg.output.grid_csv) out.grid_csv = grid_csv_text(samples);
  return out;
}

CommandResult run_witness(const RunConfig& cfg) {
  const Spacetime& s = cfg.spacetime;
  CommandResult out;
  WitnessBuild w = build_witness(cfg);
  if (w.covering) {
    const CoveringWitness& cw = *w.covering;
    const CoveringChecklist check = cw.verify(s, cfg.witness.samples, cfg.seed + 1);
    const GridSpec box = cfg.grid ? *cfg.grid : covering_box(s, cw, cfg.witness.options.verification_resolution);
    const std::vector<GridSample> samples = sample_grid(s, cw.field(), box);
    const AdmissibilityReport adm =
        summarize_admissibility(samples, cfg.tolerances.analytic, cfg.tolerances.trim_fraction);
    out.contracts_held = check.all() && adm.verdict;
    out.result = {{"case", "covering"},
                  {"covering", to_json(cw)},
                  {"checklist", to_json(check)},
                  {"grid", to_json(box)},
                  {"admissibility", to_json(adm)}};
    if (cfg.output.grid_csv) out.grid_csv = grid_csv_text(samples);
    return out;
  }
  const WitnessField& wf = *w.field;
  const GridSpec box = cfg.grid ? *cfg.grid : wf.verification_box;
  const std::vector<GridSample> samples = sample_grid(s, wf.field(), box);
  const AdmissibilityReport adm =
      summarize_admissibility(samples, cfg.tolerances.analytic, cfg.tolerances.trim_fraction);
  Json contracts = Json::object();
  bool value_ok = true;
  if (wf.kind == WitnessCase::Equality) {
    const double slack = lower_bound_slack(s, wf.field(), wf.p, wf.q);
    // f(q) - f(p) >= d holds exactly in real arithmetic; allow rounding.
    value_ok = slack >= -1e-12 && slack < wf.epsilon;
    contracts = {{"lower_bound_slack", slack}, {"epsilon", wf.epsilon}};
  } else if (wf.kind == WitnessCase::Reverse) {
    value_ok = wf.value_difference <= 0.0;
    contracts = {{"positive_part", std::max(0.0, wf.value_difference)}};
  } else {
    value_ok = std::abs(wf.value_difference) < wf.epsilon;
    contracts = {{"abs_difference", std::abs(wf.value_difference)}, {"epsilon", wf.epsilon}};
  }
  contracts["value_contract"] = value_ok;
  contracts["admissible"] = adm.verdict;
  out.contracts_held = value_ok && adm.verdict;
  out.result = {{"case", to_string(wf.kind)},
                {"witness", to_json(wf)},
                {"grid", to_json(box)},
                {"admissibility", to_json(adm)},
                {"contracts", contracts}};
  if (cfg.output.grid_csv) out.grid_csv = grid_csv_text(samples);
  return out;
}

CommandResult run_sandwich(const RunConfig& cfg) {
  VerifyOptions opt;
  opt.epsilons = cfg.epsilons;
  opt.path = cfg.budget;
  opt.witness = cfg.witness.options;
  opt.tolerances = cfg.tolerances;
  const SandwichReport rep = sandwich_report(cfg.spacetime, *cfg.p, *cfg.q, opt);
  CommandResult out;
  out.result = to_json(rep);
  out.contracts_held = rep.contracts.all();
  return out;
}

CommandResult run_suite(const RunConfig& cfg) {
  const SuiteReport rep = property_suite(cfg.spacetime, cfg.seed, cfg.trials);
  CommandResult out;
  out.result = to_json(rep);
  out.timing["properties"] = suite_timing(rep);
  out.contracts_held = rep.all_passed();
  if (cfg.output.suite_csv) {
    std::ostringstream csv;
    write_suite_csv(csv, rep);
    out.suite_csv = csv.str();
  }
  return out;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  RunOutcome outcome;
  Json& report = outcome.report;
  report = {{"schema_version", kSchemaVersion},
            {"tool", "lorentz-dist"},
            {"command", to_string(cfg.command)},
            {"config", cfg.normalized}};

  const auto start = std::chrono::steady_clock::now();
  CommandResult res;
  Json error = nullptr;
  try {
    switch (cfg.command) {
      case Command::Distance: res = run_distance(cfg); break;
      case Command::Admissible: res = run_admissible(cfg); break;
      case Command::Witness: res = run_witness(cfg); break;
      case Command::Sandwich: res = run_sandwich(cfg); break;
      case Command::Suite: res = run_suite(cfg); break;
    }
    outcome.exit_code = res.contracts_held ? 0 : 1;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    const bool obstruction = is_geometric_obstruction(e.kind());
    outcome.exit_code = obstruction ? 3 : 1;
    error = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}, {"geometric_obstruction", obstruction}};
    res.result = nullptr;
    res.contracts_held = false;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  report["status"] = {{"exit_code", outcome.exit_code}, {"contracts_held", res.contracts_held}, {"error", error}};
  report["result"] = res.result;
  if (cfg.expected_result) {
    const std::string diff = first_difference(*cfg.expected_result, res.result);
    report["replay"] = {{"matched", diff.empty()}, {"first_difference", diff.empty() ? Json(nullptr) : Json(diff)}};
    if (!diff.empty() && outcome.exit_code == 0) outcome.exit_code = 1;
    report["status"]["exit_code"] = outcome.exit_code;
  }
  res.timing["wall_seconds"] = wall;
  report["timing"] = res.timing;

  std::error_code ec;
  std::filesystem::create_directories(cfg.output.dir, ec);
  if (ec) throw Error(ErrorKind::ConfigError, "cannot create output directory " + cfg.output.dir.string());
  Json files = Json::array();
  if (res.grid_csv) {
    write_text(cfg.output.dir / *cfg.output.grid_csv, *res.grid_csv, outcome);
    files.push_back(*cfg.output.grid_csv);
  }
  if (res.suite_csv) {
    write_text(cfg.output.dir / *cfg.output.suite_csv, *res.suite_csv, outcome);
    files.push_back(*cfg.output.suite_csv);
  }
  report["files"] = files;
  write_text(cfg.output.dir / cfg.output.report, report.dump(2) + "\n", outcome);
  return outcome;
}

}  // namespace lorentz
