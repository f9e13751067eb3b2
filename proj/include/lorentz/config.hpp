#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/distance.hpp"
#include "lorentz/eikonal.hpp"
#include "lorentz/report.hpp"
#include "lorentz/witness.hpp"

namespace lorentz {

enum class Command { Distance, Admissible, Witness, Sandwich, Suite };

std::string to_string(Command c);

struct WitnessSpec {
  std::string kind = "equality";  // equality | reverse | unrelated | covering
  double epsilon = 0.01;
  WitnessOptions options;
  // covering only
  double surface = 0.0;
  CoverSide side = CoverSide::Above;
  std::vector<Point> excluded;
  std::vector<Point> guards;
  int samples = 200;
};

struct OutputSpec {
  std::filesystem::path dir = ".";
  std::string report = "report.json";
  std::optional<std::string> grid_csv;
  std::optional<std::string> suite_csv;
};

/// A validated run description. `normalized` is the config with every default
/// filled in; it is embedded in the report so the report can be replayed.
struct RunConfig {
  Command command = Command::Distance;
  Spacetime spacetime = Spacetime::minkowski(2);
  std::optional<Point> p;
  std::optional<Point> q;
  std::vector<double> epsilons{0.1, 0.01};
  std::optional<GridSpec> grid;
  PathSearchOptions budget;
  std::uint64_t seed = 0;
  int trials = 100;
  std::string field;
  GradientMode gradient = GradientMode::Analytic;
  double fd_step = 1e-4;
  EikonalTolerances tolerances;
  WitnessSpec witness;
  OutputSpec output;

  Json normalized;
  /// Present when the input was a report: the result to reproduce.
  std::optional<Json> expected_result;
};

/// Parses a config document, or a report document for replay. Unknown keys
/// anywhere are rejected. Throws Error(ConfigError).
RunConfig parse_config(const Json& document);

struct RunOutcome {
  int exit_code = 0;
  Json report;
  std::vector<std::filesystem::path> written;
};

/// Executes the command and writes the report (and any CSV files) into the
/// output directory. Exit codes: 0 all contracts held, 1 contract violation or
/// replay mismatch, 3 geometric obstruction.
RunOutcome run(const RunConfig& config);

}  // namespace lorentz
