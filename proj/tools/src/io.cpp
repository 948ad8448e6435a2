#include "nbcoll_cli/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nbcoll/errors.hpp"

namespace nbcoll::cli {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) fail(ErrorKind::InvalidArgument, "csv row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

json to_json(const VecX& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

VecX vec_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const VecX>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json to_json(const MatX& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(VecX(m.row(i).transpose())));
  return rows;
}

MatX mat_from_json(const json& j) {
  if (j.empty()) return MatX();
  MatX m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j.at(0).size()));
  for (std::size_t i = 0; i < j.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = vec_from_json(j[i]).transpose();
  return m;
}

json to_json(const Vec3List& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back({x[0], x[1], x[2]});
  return out;
}

namespace {

json complex_list(const std::vector<Complex>& z) {
  json out = json::array();
  for (const auto& c : z) out.push_back({c.real(), c.imag()});
  return out;
}

std::vector<Complex> complex_from_json(const json& j) {
  std::vector<Complex> out;
  for (const auto& c : j) out.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  return out;
}

}  // namespace

json to_json(const EquilibriumReport& r) {
  const Spectrum& s = r.spectrum;
  return {
      {"sigma", to_json(r.sigma)},
      {"V", r.V},
      {"R", r.R},
      {"grad_norm", r.grad_norm},
      {"iterations", r.iterations},
      {"chart_boundary", r.chart_boundary},
      {"dimension", r.dimension},
      {"A", to_json(r.A)},
      {"B", to_json(r.B)},
      {"b_asymmetry", r.b_asymmetry},
      {"b_richardson", r.b_richardson},
      {"spectrum",
       {{"alpha", to_json(s.alpha)},
        {"C", to_json(s.C)},
        {"c", to_json(s.c)},
        {"lambda_plus", complex_list(s.lambda_plus)},
        {"lambda_minus", complex_list(s.lambda_minus)},
        {"center_dim", s.center_dim},
        {"hyperbolic", s.hyperbolic},
        {"zero_threshold", s.zero_threshold}}},
  };
}

EquilibriumReport equilibrium_from_json(const json& j) {
  EquilibriumReport r;
  r.sigma = vec_from_json(j.at("sigma"));
  r.V = j.at("V").get<double>();
  r.R = j.at("R").get<double>();
  r.grad_norm = j.at("grad_norm").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.chart_boundary = j.at("chart_boundary").get<bool>();
  r.dimension = j.at("dimension").get<int>();
  r.A = mat_from_json(j.at("A"));
  r.B = mat_from_json(j.at("B"));
  r.b_asymmetry = j.at("b_asymmetry").get<double>();
  r.b_richardson = j.at("b_richardson").get<double>();
  const json& s = j.at("spectrum");
  r.spectrum.alpha = mat_from_json(s.at("alpha"));
  r.spectrum.C = mat_from_json(s.at("C"));
  r.spectrum.c = vec_from_json(s.at("c"));
  r.spectrum.lambda_plus = complex_from_json(s.at("lambda_plus"));
  r.spectrum.lambda_minus = complex_from_json(s.at("lambda_minus"));
  r.spectrum.center_dim = s.at("center_dim").get<int>();
  r.spectrum.hyperbolic = s.at("hyperbolic").get<bool>();
  r.spectrum.zero_threshold = s.at("zero_threshold").get<double>();
  return r;
}

json to_json(const ChartDump& d) {
  const ReducedState& rs = d.reduced;
  json residuals = json::array();
  for (const auto& [name, value] : d.residuals) residuals.push_back({{"name", name}, {"value", value}});
  return {
      {"cartesian", {{"q", to_json(d.cartesian.q)}, {"p", to_json(d.cartesian.p)}}},
      {"jacobi",
       {{"P", {d.jacobi.P[0], d.jacobi.P[1], d.jacobi.P[2]}},
        {"B", {d.jacobi.B[0], d.jacobi.B[1], d.jacobi.B[2]}},
        {"y", to_json(d.jacobi.y)},
        {"x", to_json(d.jacobi.x)}}},
      {"reduced",
       {{"Phi", rs.Phi},
        {"Theta", rs.Theta},
        {"Psi", rs.Psi},
        {"phi", rs.angles.phi},
        {"theta", rs.angles.theta},
        {"psi", rs.angles.psi},
        {"eta", to_json(rs.eta)},
        {"xi", to_json(rs.xi)}}},
      {"shape",
       {{"S", to_json(d.shape.S)}, {"R", d.shape.R}, {"sigma", to_json(d.shape.sigma)}, {"rho", d.shape.rho}}},
      {"regularized",
       {{"u", d.angles.u},
        {"v", d.angles.v},
        {"alpha", d.angles.alpha},
        {"chart", d.angles.chart},
        {"U", d.angles.U},
        {"V", d.angles.V},
        {"A", d.angles.A}}},
      {"hamiltonian",
       {{"cartesian", d.H_cartesian}, {"jacobi", d.H_jacobi}, {"so3", d.H_so3}, {"shape", d.H_shape}}},
      {"angular_momentum",
       {{"cartesian", {d.L_cartesian[0], d.L_cartesian[1], d.L_cartesian[2]}},
        {"jacobi", {d.L_jacobi[0], d.L_jacobi[1], d.L_jacobi[2]}}}},
      {"residuals", residuals},
  };
}

json to_json(const SpinReport& r) {
  json dyadic = json::array();
  for (std::size_t k = 0; k < r.dyadic.size(); ++k) {
    json row = {{"k", k}, {"I", r.dyadic[k]}};
    if (k > 0) row["ratio"] = r.ratios[k - 1];
    dyadic.push_back(row);
  }
  return {
      {"recipe", to_string(r.recipe)},
      {"equilibrium", to_json(r.equilibrium)},
      {"seed_lambda", r.seed_lambda},
      {"tau_end", r.tau_end},
      {"floor_hit", r.floor_hit},
      {"T", r.T},
      {"dyadic", dyadic},
      {"K", r.K},
      {"w_limit", {{"value", {r.w_limit[0], r.w_limit[1], r.w_limit[2]}}, {"tail_bound", r.tail_bound}}},
      {"cauchy_tail", {{"value", r.cauchy_tail}, {"tail_bound", r.tail_bound}}},
      {"tail_start", r.tail_start},
      {"converged", {{"value", r.converged}, {"tail_bound", r.tail_bound}, {"epsilon", r.tail_epsilon}}},
      {"bound_ratio", {{"value", r.bound_ratio}, {"tolerance", 1.0}}},
      {"non_collinearity", {{"sup_inv_sigma2", r.sup_inv_sigma2}, {"sup_sigma_ratio", r.sup_sigma_ratio}}},
      {"energy_check", r.energy_check},
      {"rho_check", r.rho_check},
      {"angular_momentum", r.angular_momentum},
      {"seam_crossings", r.seam_crossings},
      {"descent",
       {{"exponential", r.descent.exponential},
        {"rate", r.descent.rate},
        {"expected_rate", r.descent.expected_rate},
        {"min_W", r.descent.min_W},
        {"monotonicity_violations", r.descent.monotonicity_violations},
        {"samples", r.descent.tau.size()}}},
  };
}

}  // namespace nbcoll::cli
