#include "nbcoll_cli/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "nbcoll/errors.hpp"
#include "nbcoll/verify.hpp"

namespace nbcoll::cli {
namespace {

using nlohmann::json;

const std::map<std::string, const char*>& preset_table() {
  static const std::map<std::string, const char*> table = {
      {"equilateral", R"({
        "schema": "nbcoll-scenario/1",
        "masses": [1, 1, 1],
        "state": {
          "q": [[0.5547221981107351, 0.11316264884568442, -0.11318494229691534],
                [-0.2969768901434308, 0.3415169567337694, 0.3584748642755508],
                [-0.25774530796730427, -0.4546796055794538, -0.24528992197863547]],
          "p": [[0.1664166594332205, 0.03394879465370532, -0.0339554826890746],
                [-0.08909306704302924, 0.10245508702013083, 0.10754245928266525],
                [-0.07732359239019128, -0.13640388167383613, -0.07358697659359063]]
        },
        "find_cc": {"sigma_guess": [-1.1, 0.05]},
        "recipe": {"kind": "stable-seed", "sigma_guess": [-1.1, 0.05]}
      })"},
      {"collinear", R"({
        "schema": "nbcoll-scenario/1",
        "masses": [1, 1, 1],
        "state": {
          "q": [[-1, 0, 0], [0, 0, 0], [1, 0, 0]],
          "p": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
        },
        "find_cc": {"sigma_guess": [-0.01, 0.7]}
      })"},
      {"homothetic", R"({
        "schema": "nbcoll-scenario/1",
        "masses": [1, 1, 1],
        "recipe": {"kind": "homothetic", "sigma_guess": [-1.1, 0.05], "rho0": 1.0},
        "solver": {"tau_max": 6.0, "eq_threshold": 0.1}
      })"},
      {"stable-seed", R"({
        "schema": "nbcoll-scenario/1",
        "masses": [1, 1, 1],
        "recipe": {"kind": "stable-seed", "sigma_guess": [-1.1, 0.05], "eps": 1e-3},
        "solver": {"rtol": 1e-12, "atol": 1e-12, "tau_max": 13.0, "eq_threshold": 1.2e-3, "tail_epsilon": 1e-6}
      })"},
      {"survey", R"({
        "schema": "nbcoll-scenario/1",
        "masses": [1, 1, 1],
        "find_cc": {"survey": true, "restarts": 64}
      })"},
  };
  return table;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw SchemaError(join(path, key), "unknown field");
  }
}

double number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw SchemaError(join(path, key), "expected a number");
  return v.get<double>();
}

long long integer(const json& obj, const std::string& path, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw SchemaError(join(path, key), "expected an integer");
  return v.get<long long>();
}

bool boolean(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw SchemaError(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::string text(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw SchemaError(join(path, key), "expected a string");
  return v.get<std::string>();
}

VecX vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of numbers");
  VecX out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a number");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

Vec3List points(const json& v, const std::string& path, int count) {
  if (!v.is_array() || static_cast<int>(v.size()) != count)
    throw SchemaError(path, "expected " + std::to_string(count) + " three-vectors, one per body");
  Vec3List out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const VecX x = vector(v[i], at);
    if (x.size() != 3) throw SchemaError(at, "expected three components");
    out.emplace_back(x[0], x[1], x[2]);
  }
  return out;
}

RegularizedAngles angles(const json& obj, const std::string& path, RegularizedAngles w) {
  only_keys(obj, path, {"u", "v", "alpha", "chart"});
  w.u = number(obj, path, "u", w.u);
  w.v = number(obj, path, "v", w.v);
  w.alpha = number(obj, path, "alpha", w.alpha);
  w.chart = static_cast<int>(integer(obj, path, "chart", w.chart));
  if (w.chart != 1 && w.chart != -1) throw SchemaError(join(path, "chart"), "must be +1 or -1");
  if (w.u * w.u + w.v * w.v > 1.0) throw SchemaError(path, "u^2 + v^2 must not exceed 1");
  return w;
}

// Default central-configuration guess for the equal-mass classical shapes.
VecX default_guess(const std::vector<double>& masses) {
  if (masses.size() == 3) return lagrange_seed();
  if (masses.size() == 4) return configuration_shape(MassSystem(masses), tetrahedron());
  return {};
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, doc] : preset_table()) names.push_back(name);
  return names;
}

json preset(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) throw SchemaError("preset", "no preset named '" + name + "'");
  return json::parse(it->second);
}

json resolve(const std::optional<json>& document, const std::optional<std::string>& preset_name) {
  std::optional<std::string> name = preset_name;
  if (!name && document && document->contains("preset")) {
    if (!document->at("preset").is_string()) throw SchemaError("preset", "expected a string");
    name = document->at("preset").get<std::string>();
  }
  if (!name && !document) throw SchemaError("<root>", "a scenario file or a preset is required");
  json merged = name ? preset(*name) : json::object();
  if (document) {
    json overlay = *document;
    if (overlay.is_object()) overlay.erase("preset");
    merged.merge_patch(overlay);
  }
  return merged;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("<file>", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("<file>", std::string("not valid JSON: ") + e.what());
  }
}

Scenario parse_scenario(const json& doc) {
  only_keys(doc, "", {"schema", "masses", "seed", "output", "state", "solver", "recipe", "find_cc", "transform"});
  Scenario sc;
  sc.document = doc;
  if (!doc.contains("schema")) throw SchemaError("schema", "missing; expected \"" + std::string(kScenarioSchema) + "\"");
  if (text(doc, "", "schema", "") != kScenarioSchema)
    throw SchemaError("schema", "unsupported version; expected \"" + std::string(kScenarioSchema) + "\"");

  if (!doc.contains("masses")) throw SchemaError("masses", "missing");
  const VecX m = vector(doc.at("masses"), "masses");
  if (m.size() < 3) throw SchemaError("masses", "at least three bodies are required");
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!(m[i] > 0.0)) throw SchemaError("masses[" + std::to_string(i) + "]", "masses must be positive");
  sc.masses.assign(m.data(), m.data() + m.size());
  const int bodies = static_cast<int>(sc.masses.size());
  const int d = shape_dim(bodies - 1);

  const long long seed = integer(doc, "", "seed", 1);
  if (seed < 0) throw SchemaError("seed", "must be non-negative");
  sc.seed = static_cast<std::uint64_t>(seed);

  if (doc.contains("output")) {
    only_keys(doc.at("output"), "output", {"dir"});
    sc.out_dir = text(doc.at("output"), "output", "dir", sc.out_dir);
  }

  if (doc.contains("state")) {
    const json& s = doc.at("state");
    only_keys(s, "state", {"q", "p"});
    if (!s.contains("q")) throw SchemaError("state.q", "missing");
    CartesianState cs;
    cs.q = points(s.at("q"), "state.q", bodies);
    cs.p = s.contains("p") ? points(s.at("p"), "state.p", bodies) : Vec3List(bodies, Vec3::Zero());
    sc.state = cs;
  }

  if (doc.contains("transform")) {
    only_keys(doc.at("transform"), "transform", {"tol"});
    sc.transform_tol = number(doc.at("transform"), "transform", "tol", sc.transform_tol);
    if (!(sc.transform_tol > 0.0)) throw SchemaError("transform.tol", "must be positive");
  }

  ExperimentConfig& cfg = sc.spin;
  cfg.masses = sc.masses;
  cfg.sigma_guess = default_guess(sc.masses);
  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    only_keys(s, "solver", {"rtol", "atol", "tau_max", "eq_threshold", "tail_epsilon"});
    cfg.rtol = number(s, "solver", "rtol", cfg.rtol);
    cfg.atol = number(s, "solver", "atol", cfg.atol);
    cfg.tau_max = number(s, "solver", "tau_max", cfg.tau_max);
    cfg.eq_threshold = number(s, "solver", "eq_threshold", cfg.eq_threshold);
    cfg.tail_epsilon = number(s, "solver", "tail_epsilon", cfg.tail_epsilon);
    for (const char* key : {"rtol", "atol", "tau_max", "eq_threshold", "tail_epsilon"})
      if (s.contains(key) && !(s.at(key).get<double>() > 0.0)) throw SchemaError(join("solver", key), "must be positive");
  }
  if (doc.contains("recipe")) {
    const json& r = doc.at("recipe");
    only_keys(r, "recipe", {"kind", "sigma_guess", "rho0", "eps", "mode_index", "w0", "state"});
    if (!r.contains("kind")) throw SchemaError("recipe.kind", "missing");
    try {
      cfg.recipe = parse_recipe(text(r, "recipe", "kind", ""));
    } catch (const Error&) {
      throw SchemaError("recipe.kind", "expected homothetic, stable-seed or user-state");
    }
    if (r.contains("sigma_guess")) cfg.sigma_guess = vector(r.at("sigma_guess"), "recipe.sigma_guess");
    cfg.rho0 = number(r, "recipe", "rho0", cfg.rho0);
    if (!(cfg.rho0 > 0.0)) throw SchemaError("recipe.rho0", "must be positive");
    cfg.eps = number(r, "recipe", "eps", cfg.eps);
    if (!(cfg.eps >= 0.0)) throw SchemaError("recipe.eps", "must be non-negative");
    cfg.mode_index = static_cast<int>(integer(r, "recipe", "mode_index", cfg.mode_index));
    if (cfg.mode_index < -1 || cfg.mode_index >= d) throw SchemaError("recipe.mode_index", "out of range");
    if (r.contains("w0")) cfg.w0 = angles(r.at("w0"), "recipe.w0", cfg.w0);
    if (cfg.recipe == Recipe::UserState) {
      if (!r.contains("state")) throw SchemaError("recipe.state", "required for the user-state recipe");
      const json& s = r.at("state");
      only_keys(s, "recipe.state", {"rho", "R", "S", "sigma", "u", "v", "alpha", "chart"});
      for (const char* key : {"rho", "R", "S", "sigma"})
        if (!s.contains(key)) throw SchemaError(join("recipe.state", key), "missing");
      BlowupState& b = cfg.user_state;
      b.rho = number(s, "recipe.state", "rho", 0.0);
      if (!(b.rho >= 0.0)) throw SchemaError("recipe.state.rho", "must be non-negative");
      b.R = number(s, "recipe.state", "R", 0.0);
      b.S = vector(s.at("S"), "recipe.state.S");
      b.sigma = vector(s.at("sigma"), "recipe.state.sigma");
      if (b.S.size() != d) throw SchemaError("recipe.state.S", "expected " + std::to_string(d) + " entries");
      if (b.sigma.size() != d) throw SchemaError("recipe.state.sigma", "expected " + std::to_string(d) + " entries");
      json w = s;
      for (const char* key : {"rho", "R", "S", "sigma"}) w.erase(key);
      const RegularizedAngles ra = angles(w, "recipe.state", {});
      b.u = ra.u;
      b.v = ra.v;
      b.alpha = ra.alpha;
      b.chart = ra.chart;
    }
  }
  if (cfg.recipe != Recipe::UserState && cfg.sigma_guess.size() != d)
    throw SchemaError("recipe.sigma_guess", "expected " + std::to_string(d) + " entries");

  FindCcOptions& fc = sc.find_cc;
  fc.sigma_guess = default_guess(sc.masses);
  fc.survey_options.seed = sc.seed;
  if (doc.contains("find_cc")) {
    const json& f = doc.at("find_cc");
    only_keys(f, "find_cc", {"sigma_guess", "survey", "restarts", "cluster_tol", "box", "tol", "max_iter"});
    if (f.contains("sigma_guess")) fc.sigma_guess = vector(f.at("sigma_guess"), "find_cc.sigma_guess");
    fc.survey = boolean(f, "find_cc", "survey", fc.survey);
    fc.survey_options.restarts = static_cast<int>(integer(f, "find_cc", "restarts", fc.survey_options.restarts));
    if (fc.survey_options.restarts < 1) throw SchemaError("find_cc.restarts", "must be at least 1");
    fc.survey_options.cluster_tol = number(f, "find_cc", "cluster_tol", fc.survey_options.cluster_tol);
    fc.survey_options.box = number(f, "find_cc", "box", fc.survey_options.box);
    fc.newton.tol = number(f, "find_cc", "tol", fc.newton.tol);
    fc.newton.max_iter = static_cast<int>(integer(f, "find_cc", "max_iter", fc.newton.max_iter));
    for (const char* key : {"cluster_tol", "box", "tol"})
      if (f.contains(key) && !(f.at(key).get<double>() > 0.0)) throw SchemaError(join("find_cc", key), "must be positive");
    if (fc.newton.max_iter < 1) throw SchemaError("find_cc.max_iter", "must be at least 1");
  }
  if (!fc.survey && fc.sigma_guess.size() != d)
    throw SchemaError("find_cc.sigma_guess", "expected " + std::to_string(d) + " entries");
  fc.survey_options.newton = fc.newton;
  cfg.newton = fc.newton;
  return sc;
}

void apply_tolerance(Scenario& sc, double tol) {
  if (!(tol > 0.0)) throw SchemaError("--tol", "must be positive");
  sc.spin.rtol = tol;
  sc.spin.atol = tol;
  sc.find_cc.newton.tol = tol;
  sc.find_cc.survey_options.newton.tol = tol;
  sc.spin.newton.tol = tol;
  sc.transform_tol = tol;
}

void apply_seed(Scenario& sc, std::uint64_t seed) {
  sc.seed = seed;
  sc.find_cc.survey_options.seed = seed;
}

}  // namespace nbcoll::cli
