#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "nbcoll_cli/commands.hpp"
#include "nbcoll_cli/io.hpp"
#include "nbcoll_cli/scenario.hpp"
#include "nbcoll/verify.hpp"

namespace nbcoll::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nbcoll_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string schema_field(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const SchemaError& e) {
    return e.field();
  }
  return "";
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(NBCOLL_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, EveryPresetParses) {
  ASSERT_FALSE(preset_names().empty());
  for (const auto& name : preset_names()) {
    const Scenario sc = parse_scenario(resolve(std::nullopt, name));
    EXPECT_FALSE(sc.masses.empty()) << name;
    EXPECT_NO_THROW(sc.spin.validate()) << name;
  }
  EXPECT_THROW(preset("spiral"), SchemaError);
}

TEST(Cli, SchemaErrorsNameTheField) {
  EXPECT_EQ(schema_field({{"schema", kScenarioSchema}, {"masses", {1.0, 1.0, -1.0}}}), "masses[2]");
  EXPECT_EQ(schema_field({{"schema", kScenarioSchema}, {"masses", {1.0, 1.0, 1.0}}, {"solver", {{"rtl", 1e-9}}}}),
            "solver.rtl");
  EXPECT_EQ(schema_field({{"schema", "other/2"}, {"masses", {1.0, 1.0, 1.0}}}), "schema");
  EXPECT_EQ(schema_field({{"schema", kScenarioSchema}, {"masses", {1.0, 1.0, 1.0}}, {"colour", 1}}), "colour");
}

TEST(Cli, DocumentOverridesPreset) {
  const json doc = {{"solver", {{"tau_max", 7.5}}}};
  const Scenario sc = parse_scenario(resolve(doc, std::string("stable-seed")));
  EXPECT_EQ(sc.spin.tau_max, 7.5);
  EXPECT_EQ(sc.spin.eps, 1e-3);
  EXPECT_EQ(sc.spin.recipe, Recipe::StableSeed);
}

TEST(Cli, OverridesApplyToEveryTolerance) {
  Scenario sc = parse_scenario(resolve(std::nullopt, std::string("equilateral")));
  apply_tolerance(sc, 1e-9);
  EXPECT_EQ(sc.spin.rtol, 1e-9);
  EXPECT_EQ(sc.spin.atol, 1e-9);
  EXPECT_EQ(sc.find_cc.newton.tol, 1e-9);
  EXPECT_EQ(sc.transform_tol, 1e-9);
  apply_seed(sc, 77);
  EXPECT_EQ(sc.seed, 77u);
}

TEST(Cli, FormatDoubleRoundTrips) {
  for (double x : {0.1, -2.4494897427831781, 1e-300, 12345.678901234567}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Cli, CsvTableLayout) {
  CsvTable t({"a", "b"});
  t.add({"1", "2"});
  t.add({"3", "4"});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.str(), "a,b\n1,2\n3,4\n");
}

TEST(Cli, WriteAtomicCreatesDirectoriesAndReplaces) {
  const fs::path dir = scratch("atomic");
  const fs::path target = dir / "sub" / "x.txt";
  write_atomic(target.string(), "first");
  write_atomic(target.string(), "second");
  EXPECT_EQ(slurp(target), "second");
  EXPECT_FALSE(fs::exists(target.string() + ".tmp"));
}

TEST(Cli, EquilibriumJsonRoundTripIsLossless) {
  const EquilibriumReport r = find_central_config(MassSystem({1.0, 1.0, 1.0}), euler_seed());
  const EquilibriumReport back = equilibrium_from_json(json::parse(to_json(r).dump()));
  EXPECT_EQ(back.sigma, r.sigma);
  EXPECT_EQ(back.V, r.V);
  EXPECT_EQ(back.R, r.R);
  EXPECT_EQ(back.A, r.A);
  EXPECT_EQ(back.B, r.B);
  EXPECT_EQ(back.spectrum.c, r.spectrum.c);
  EXPECT_EQ(back.spectrum.lambda_plus, r.spectrum.lambda_plus);
  EXPECT_EQ(back.spectrum.center_dim, r.spectrum.center_dim);
  EXPECT_EQ(back.chart_boundary, r.chart_boundary);
}

TEST(Cli, TransformWritesResidualTables) {
  Scenario sc = parse_scenario(resolve(std::nullopt, std::string("equilateral")));
  sc.out_dir = scratch("transform").string();
  std::ostringstream out;
  EXPECT_EQ(cmd_transform(sc, out), kSuccess);
  EXPECT_TRUE(fs::exists(fs::path(sc.out_dir) / "residuals.csv"));
  EXPECT_TRUE(fs::exists(fs::path(sc.out_dir) / "transform.json"));
  EXPECT_NE(out.str().find("round trip"), std::string::npos);
}

TEST(Cli, ToolExitCodes) {
  const fs::path dir = scratch("exit");
  EXPECT_EQ(run_tool("transform --preset equilateral --out " + (dir / "a").string()), kSuccess);
  EXPECT_EQ(run_tool("transform --preset collinear --out " + (dir / "b").string()), kDomainError);
  EXPECT_EQ(run_tool("find-cc --preset nowhere --out " + (dir / "c").string()), kSchemaError);
  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << R"({"schema": "nbcoll-scenario/1", "masses": [1, 1, 0]})";
  EXPECT_EQ(run_tool("find-cc --scenario " + bad.string() + " --out " + (dir / "d").string()), kSchemaError);
}

TEST(Cli, SpinOutputIsByteIdenticalAcrossRuns) {
  const fs::path dir = scratch("spin");
  ASSERT_EQ(run_tool("spin --preset stable-seed --out " + (dir / "a").string()), kSuccess);
  ASSERT_EQ(run_tool("spin --preset stable-seed --out " + (dir / "b").string()), kSuccess);
  const std::string a = slurp(dir / "a" / "spin.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir / "b" / "spin.csv"));
  EXPECT_EQ(slurp(dir / "a" / "summary.csv"), slurp(dir / "b" / "summary.csv"));
}

}  // namespace
}  // namespace nbcoll::cli
