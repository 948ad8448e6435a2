#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nbcoll/errors.hpp"
#include "nbcoll_cli/commands.hpp"
#include "nbcoll_cli/scenario.hpp"

namespace {

using namespace nbcoll::cli;

struct Flags {
  std::string scenario;
  std::string out;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string preset;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--scenario", f.scenario, "scenario file (JSON, schema nbcoll-scenario/1)");
  cmd->add_option("--out", f.out, "output directory (overrides output.dir)");
  cmd->add_option("--tol", f.tol, "tolerance override for the command");
  cmd->add_option("--seed", f.seed, "random seed override");
  cmd->add_option("--preset", f.preset, "built-in scenario used as the base document");
}

Scenario load(const Flags& f) {
  std::optional<nlohmann::json> doc;
  if (!f.scenario.empty()) doc = read_json_file(f.scenario);
  std::optional<std::string> preset_name;
  if (!f.preset.empty()) preset_name = f.preset;
  Scenario sc = parse_scenario(resolve(doc, preset_name));
  if (f.tol) apply_tolerance(sc, *f.tol);
  if (f.seed) apply_seed(sc, *f.seed);
  if (!f.out.empty()) sc.out_dir = f.out;
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision-manifold toolkit for the zero-angular-momentum N-body problem"};
  app.require_subcommand(1);
  Flags flags;
  auto* transform = app.add_subcommand("transform", "carry an explicit state through every chart");
  auto* find_cc = app.add_subcommand("find-cc", "locate central configurations and classify their spectra");
  auto* spin = app.add_subcommand("spin", "run a spin experiment and write the time series and summary");
  auto* verify = app.add_subcommand("verify", "run the acceptance suite and print the pass/fail table");
  for (auto* cmd : {transform, find_cc, spin, verify}) add_common(cmd, flags);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kSchemaError;
  }

  try {
    if (verify->parsed()) return cmd_verify(flags.seed.value_or(20261015), flags.out, std::cout);
    const Scenario sc = load(flags);
    if (transform->parsed()) return cmd_transform(sc, std::cout);
    if (find_cc->parsed()) return cmd_find_cc(sc, std::cout);
    return cmd_spin(sc, std::cout);
  } catch (const SchemaError& e) {
    std::cerr << e.what() << '\n';
    return kSchemaError;
  } catch (const nbcoll::Error& e) {
    std::cerr << e.what() << '\n';
    if (e.kind() == nbcoll::ErrorKind::NoConvergence) return kNoConvergence;
    if (e.kind() == nbcoll::ErrorKind::InvalidArgument) return kSchemaError;
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainError;
  }
}
