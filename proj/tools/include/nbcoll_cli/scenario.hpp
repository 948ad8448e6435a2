#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nbcoll/equilibria.hpp"
#include "nbcoll/nbody.hpp"
#include "nbcoll/spin_lab.hpp"

namespace nbcoll::cli {

inline constexpr const char* kScenarioSchema = "nbcoll-scenario/1";

// Malformed scenario; the message names the offending field.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : std::runtime_error("schema error at '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct FindCcOptions {
  VecX sigma_guess;
  bool survey = false;
  SurveyOptions survey_options;
  NewtonOptions newton;
};

struct Scenario {
  std::vector<double> masses;
  std::optional<CartesianState> state;
  ExperimentConfig spin;
  FindCcOptions find_cc;
  double transform_tol = 1e-10;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  nlohmann::json document;  // the merged document the scenario was parsed from
};

std::vector<std::string> preset_names();
// Throws SchemaError for unknown names.
nlohmann::json preset(const std::string& name);

// Preset (if any, from the argument or the document's "preset" key) overlaid by the document.
nlohmann::json resolve(const std::optional<nlohmann::json>& document, const std::optional<std::string>& preset_name);
Scenario parse_scenario(const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);

// Command-line overrides applied after parsing.
void apply_tolerance(Scenario& sc, double tol);
void apply_seed(Scenario& sc, std::uint64_t seed);

}  // namespace nbcoll::cli
