#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lorentz/config.hpp"
#include "lorentz/error.hpp"

using namespace lorentz;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lorentz_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunOutcome run_json(const std::string& text, const fs::path& dir) {
  RunConfig cfg = parse_config(Json::parse(text));
  cfg.output.dir = dir;
  return run(cfg);
}

ErrorKind parse_error(const std::string& text) {
  try {
    parse_config(Json::parse(text));
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidPoint;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

}  // namespace

TEST(Config, UnknownKeysAreRejectedAtEveryLevel) {
  EXPECT_EQ(parse_error(R"({"command":"distance","spacetime":{"kind":"minkowski"},"extra":1})"),
            ErrorKind::ConfigError);
  EXPECT_EQ(parse_error(R"({"command":"distance","spacetime":{"kind":"minkowski","radius":1}})"),
            ErrorKind::ConfigError);
  EXPECT_EQ(parse_error(R"({"command":"suite","spacetime":{"kind":"minkowski"},"budget":{"segs":3}})"),
            ErrorKind::ConfigError);
  EXPECT_EQ(parse_error(R"({"command":"fly","spacetime":{"kind":"minkowski"}})"), ErrorKind::ConfigError);
  EXPECT_EQ(parse_error(R"({"command":"distance","spacetime":{"kind":"minkowski"},"points":{"p":[0,0]}})"),
            ErrorKind::ConfigError);
  EXPECT_EQ(parse_error(R"({"command":"distance","spacetime":{"kind":"minkowski","dim":3},
                            "points":{"p":[0,0],"q":[1,0]}})"),
            ErrorKind::ConfigError);
  EXPECT_EQ(parse_error(R"({"command":"sandwich","spacetime":{"kind":"flat_cylinder"},
                            "points":{"p":[0,0],"q":[1,0]},"epsilons":[0.01,0.1]})"),
            ErrorKind::ConfigError);
}

TEST(Config, DefaultsAreWrittenIntoTheNormalizedConfig) {
  const RunConfig cfg = parse_config(Json::parse(
      R"({"command":"distance","spacetime":{"kind":"minkowski"},"points":{"p":[0,0],"q":[2,0]}})"));
  EXPECT_EQ(cfg.normalized["budget"]["segments"], 8);
  EXPECT_EQ(cfg.normalized["budget"]["restarts"], 20);
  EXPECT_EQ(cfg.normalized["spacetime"]["dim"], 2);
  EXPECT_EQ(cfg.normalized["seed"], 0);
  EXPECT_FALSE(cfg.normalized["output"].contains("dir"));
}

TEST(Run, DistanceExample) {
  const fs::path dir = scratch("distance");
  const RunOutcome out = run_json(
      R"({"command":"distance","spacetime":{"kind":"minkowski","dim":2},"points":{"p":[0,0],"q":[2,0]}})", dir);
  EXPECT_EQ(out.exit_code, 0);
  const Json report = read_json(dir / "report.json");
  EXPECT_EQ(report["schema_version"], 1);
  EXPECT_EQ(report["result"]["closed_form"].get<double>(), 2.0);
  EXPECT_EQ(report["status"]["exit_code"], 0);
  EXPECT_EQ(report["result"]["path_search"]["best_curve"].size(), 9u);
}

TEST(Run, SandwichExampleAndReplay) {
  const fs::path dir = scratch("sandwich");
  const RunOutcome out = run_json(R"({"command":"sandwich","spacetime":{"kind":"flat_cylinder"},
      "points":{"p":[0,0],"q":[4,3.141592653589793]}})",
                                  dir);
  EXPECT_EQ(out.exit_code, 0);
  const Json report = read_json(dir / "report.json");
  EXPECT_NEAR(report["result"]["closed_form"].get<double>(), 2.4758, 2e-4);
  EXPECT_LT(report["result"]["gap"].get<double>(), 0.05);
  // The report names the witness and its auxiliary points.
  EXPECT_TRUE(report["result"]["variational"]["witness"]["auxiliary"].contains("p_prime"));

  const fs::path again = scratch("sandwich_replay");
  RunConfig replay = parse_config(report);
  replay.output.dir = again;
  const RunOutcome second = run(replay);
  EXPECT_EQ(second.exit_code, 0);
  EXPECT_TRUE(second.report["replay"]["matched"].get<bool>());
  EXPECT_EQ(first_difference(report["result"], read_json(again / "report.json")["result"]), "");
}

TEST(Run, ReplayDetectsTampering) {
  const fs::path dir = scratch("tamper");
  run_json(R"({"command":"distance","spacetime":{"kind":"minkowski"},"points":{"p":[0,0],"q":[2,1]}})", dir);
  Json report = read_json(dir / "report.json");
  report["result"]["lower"] = report["result"]["lower"].get<double>() + 1e-15;
  RunConfig replay = parse_config(report);
  replay.output.dir = scratch("tamper_replay");
  const RunOutcome out = run(replay);
  EXPECT_EQ(out.exit_code, 1);
  EXPECT_EQ(out.report["replay"]["first_difference"], "/lower");
}

TEST(Run, AdmissibleExampleNamesTheViolation) {
  const fs::path dir = scratch("admissible");
  const RunOutcome out = run_json(R"({"command":"admissible","spacetime":{"kind":"minkowski"},"field":"0.5*t",
      "grid":{"box":[[-1,1],[-1,1]],"resolution":21},"output":{"grid_csv":"grid.csv"}})",
                                  dir);
  EXPECT_EQ(out.exit_code, 1);
  const std::string violation = out.report["result"]["violation"].get<std::string>();
  EXPECT_NE(violation.find("eikonal"), std::string::npos);
  std::ifstream csv(dir / "grid.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "t,x,f,eikonal_value,orientation_ok");
}

TEST(Run, AffineFieldSyntax) {
  const fs::path dir = scratch("affine");
  for (const char* field : {"t", "1*t", "2.5*t - 3", "1e0*t+4"}) {
    Json cfg = Json::parse(R"({"command":"admissible","spacetime":{"kind":"minkowski"},
        "grid":{"box":[[0,1],[0,1]],"resolution":5}})");
    cfg["field"] = field;
    RunConfig parsed = parse_config(cfg);
    parsed.output.dir = dir;
    EXPECT_EQ(run(parsed).exit_code, 0) << field;
  }
  Json bad = Json::parse(R"({"command":"admissible","spacetime":{"kind":"minkowski"},"field":"t^2",
      "grid":{"box":[[0,1],[0,1]],"resolution":5}})");
  RunConfig parsed = parse_config(bad);
  parsed.output.dir = dir;
  EXPECT_THROW(run(parsed), Error);
}

TEST(Run, CoveringWitnessCommand) {
  const fs::path dir = scratch("covering");
  const RunOutcome out = run_json(R"({"command":"witness","spacetime":{"kind":"flat_cylinder"},
      "witness":{"case":"covering","surface":1,"side":"above","excluded":[[1,0]],"guards":[[1.4,0]]}})",
                                  dir);
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_TRUE(out.report["result"]["checklist"]["all"].get<bool>());
}

TEST(Run, GeometricObstructionExitsWithThree) {
  const fs::path dir = scratch("obstruction");
  const RunOutcome out = run_json(R"({"command":"witness","spacetime":{"kind":"flat_cylinder"},
      "witness":{"case":"covering","surface":1,"excluded":[[1,0]],"guards":[[1.4,0]],"r_max":0.1,"min_depth":0.05}})",
                                  dir);
  EXPECT_EQ(out.exit_code, 3);
  EXPECT_EQ(out.report["status"]["error"]["kind"], "CoverageImpossible");
  EXPECT_TRUE(out.report["status"]["error"]["geometric_obstruction"].get<bool>());
}

TEST(Run, SuiteWritesCsv) {
  const fs::path dir = scratch("suite");
  const RunOutcome out = run_json(R"({"command":"suite","spacetime":{"kind":"minkowski"},"seed":3,"trials":5,
      "output":{"suite_csv":"suite.csv"}})",
                                  dir);
  EXPECT_EQ(out.exit_code, 0);
  EXPECT_TRUE(fs::exists(dir / "suite.csv"));
  EXPECT_TRUE(out.report["timing"].contains("properties"));
}
