#include "nbcoll_cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "nbcoll/errors.hpp"
#include "nbcoll/pipeline.hpp"
#include "nbcoll/verify.hpp"
#include "nbcoll_cli/io.hpp"

namespace nbcoll::cli {
namespace {

using nlohmann::json;

std::string path_in(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string fmt(double x) { return format_double(x); }

std::string row_text(const char* fmt_str, const std::string& a, double b, double c, const char* d) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt_str, a.c_str(), b, c, d);
  return buf;
}

void indexed_header(std::vector<std::string>& h, const std::string& stem, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) h.push_back(stem + std::to_string(i + 1));
}

}  // namespace

int cmd_transform(const Scenario& sc, std::ostream& out) {
  if (!sc.state) throw SchemaError("state", "required by transform");
  const MassSystem ms(sc.masses);
  const ChartDump dump = chart_dump(ms, *sc.state);

  CsvTable residuals({"name", "value", "tolerance", "pass"});
  out << "round trip                      residual     tolerance\n";
  bool ok = true;
  for (const auto& [name, value] : dump.residuals) {
    const bool pass = std::isfinite(value) && value < sc.transform_tol;
    ok = ok && pass;
    residuals.add({name, fmt(value), fmt(sc.transform_tol), pass ? "1" : "0"});
    out << row_text("%-30s %12.3e %12.3e  %s\n", name, value, sc.transform_tol, pass ? "ok" : "FAIL");
  }
  const RegularizedAngles& w = dump.angles;
  const ReducedState& rs = dump.reduced;
  char buf[256];
  std::snprintf(buf, sizeof buf, "components Phi Theta Psi U V A: %.3e %.3e %.3e %.3e %.3e %.3e\n", rs.Phi, rs.Theta,
                rs.Psi, w.U, w.V, w.A);
  out << buf;

  CsvTable charts({"H_cartesian", "H_jacobi", "H_so3", "H_shape", "Phi", "Theta", "Psi", "U", "V", "A", "phi",
                   "theta", "psi", "u", "v", "alpha", "chart", "rho", "R"});
  charts.add({fmt(dump.H_cartesian), fmt(dump.H_jacobi), fmt(dump.H_so3), fmt(dump.H_shape), fmt(rs.Phi),
              fmt(rs.Theta), fmt(rs.Psi), fmt(w.U), fmt(w.V), fmt(w.A), fmt(rs.angles.phi), fmt(rs.angles.theta),
              fmt(rs.angles.psi), fmt(w.u), fmt(w.v), fmt(w.alpha), std::to_string(w.chart), fmt(dump.shape.rho),
              fmt(dump.shape.R)});
  json doc = to_json(dump);
  doc["masses"] = sc.masses;
  doc["tolerance"] = sc.transform_tol;
  write_atomic(path_in(sc.out_dir, "residuals.csv"), residuals.str());
  write_atomic(path_in(sc.out_dir, "charts.csv"), charts.str());
  write_atomic(path_in(sc.out_dir, "transform.json"), doc.dump(2) + "\n");
  return ok ? kSuccess : kChecksFailed;
}

int cmd_find_cc(const Scenario& sc, std::ostream& out) {
  const MassSystem ms(sc.masses);
  std::vector<EquilibriumReport> reports;
  if (sc.find_cc.survey) {
    reports = survey(ms, sc.find_cc.survey_options);
    if (reports.empty()) fail(ErrorKind::NoConvergence, "survey found no critical point");
  } else {
    reports.push_back(find_central_config(ms, sc.find_cc.sigma_guess, sc.find_cc.newton));
  }
  const double tol = sc.find_cc.newton.tol;
  const Eigen::Index d = shape_dim(ms.n());

  std::vector<std::string> header = {"index", "V", "R", "grad_norm", "grad_tol", "center_dim", "hyperbolic",
                                     "chart_boundary", "iterations"};
  indexed_header(header, "sigma_", d);
  indexed_header(header, "c_", d);
  CsvTable table(header);
  json list = json::array();
  out << "  #            V            R    grad_norm  center_dim  hyperbolic  boundary\n";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const EquilibriumReport& r = reports[k];
    if (!(r.grad_norm < tol))
      fail(ErrorKind::NoConvergence, "gradient norm " + fmt(r.grad_norm) + " above tolerance " + fmt(tol));
    std::vector<std::string> row = {std::to_string(k),
                                    fmt(r.V),
                                    fmt(r.R),
                                    fmt(r.grad_norm),
                                    fmt(tol),
                                    std::to_string(r.spectrum.center_dim),
                                    r.spectrum.hyperbolic ? "1" : "0",
                                    r.chart_boundary ? "1" : "0",
                                    std::to_string(r.iterations)};
    for (Eigen::Index i = 0; i < d; ++i) row.push_back(fmt(r.sigma[i]));
    for (Eigen::Index i = 0; i < d; ++i) row.push_back(i < r.spectrum.c.size() ? fmt(r.spectrum.c[i]) : "nan");
    table.add(row);
    list.push_back(to_json(r));
    char buf[160];
    std::snprintf(buf, sizeof buf, "%3zu %12.8f %12.8f %12.3e %11d %11s %9s\n", k, r.V, r.R, r.grad_norm,
                  r.spectrum.center_dim, r.spectrum.hyperbolic ? "yes" : "no", r.chart_boundary ? "yes" : "no");
    out << buf;
  }
  const json doc = {{"schema", "nbcoll-equilibria/1"}, {"masses", sc.masses}, {"tolerance", tol}, {"reports", list}};
  write_atomic(path_in(sc.out_dir, "equilibria.csv"), table.str());
  write_atomic(path_in(sc.out_dir, "equilibria.json"), doc.dump(2) + "\n");
  return kSuccess;
}

int cmd_spin(const Scenario& sc, std::ostream& out) {
  sc.spin.validate();
  const MassSystem ms(sc.masses);
  const Experiment ex = run_experiment(sc.spin);
  const Trajectory& tr = ex.trajectory;
  const SpinReport& rep = ex.report;
  const Eigen::Index d = shape_dim(ms.n());
  const bool projected = sc.spin.recipe == Recipe::StableSeed;

  std::vector<std::string> header = {"tau", "rho", "Rt", "S_norm"};
  indexed_header(header, "sigma_", d);
  for (const char* h : {"u", "v", "alpha", "chart", "E", "E_residual", "sup_inv_sigma2", "sup_sigma_ratio"})
    header.push_back(h);
  CsvTable series(header);
  const double E0 = tr.diag.front().E, L0 = tr.diag.front().L;
  for (std::size_t k = 0; k < tr.tau.size(); ++k) {
    const BlowupState& s = tr.states[k];
    const NodeDiagnostics& nd = tr.diag[k];
    const double expected = projected ? 0.0 : E0 * std::exp(nd.L - L0);
    std::vector<std::string> row = {fmt(tr.tau[k]), fmt(s.rho), fmt(s.R), fmt(s.S.norm())};
    for (Eigen::Index i = 0; i < d; ++i) row.push_back(fmt(s.sigma[i]));
    for (const std::string& cell : {fmt(s.u), fmt(s.v), fmt(s.alpha), std::to_string(s.chart), fmt(nd.E),
                                    fmt(std::abs(nd.E - expected)), fmt(ex.running_inv_sigma2[k]),
                                    fmt(ex.running_sigma_ratio[k])})
      row.push_back(cell);
    series.add(row);
  }

  const double rtol = sc.spin.rtol;
  CsvTable summary({"quantity", "value", "bound", "bound_kind"});
  auto add = [&summary](const std::string& q, double v, double b, const std::string& kind) {
    summary.add({q, fmt(v), fmt(b), kind});
  };
  add("tau_end", rep.tau_end, rtol, "rtol");
  add("T", rep.T, sc.spin.eq_threshold, "proximity_threshold");
  add("K", rep.K, rtol, "rtol");
  for (std::size_t k = 0; k < rep.dyadic.size(); ++k) add("I_" + std::to_string(k), rep.dyadic[k], rtol, "rtol");
  for (std::size_t k = 0; k < rep.ratios.size(); ++k)
    add("ratio_" + std::to_string(k + 1), rep.ratios[k], 1.0, "geometric_limit");
  add("u_limit", rep.w_limit[0], rep.tail_bound, "tail_bound");
  add("v_limit", rep.w_limit[1], rep.tail_bound, "tail_bound");
  add("alpha_limit", rep.w_limit[2], rep.tail_bound, "tail_bound");
  add("cauchy_tail", rep.cauchy_tail, rep.tail_bound, "tail_bound");
  add("tail_bound", rep.tail_bound, rep.tail_epsilon, "epsilon");
  add("bound_ratio", rep.bound_ratio, 1.0, "bound");
  add("sup_inv_sigma2", rep.sup_inv_sigma2, rtol, "rtol");
  add("sup_sigma_ratio", rep.sup_sigma_ratio, rtol, "rtol");
  add("energy_check", rep.energy_check, 10.0 * rtol, "tolerance");
  add("rho_check", rep.rho_check, 10.0 * rtol, "tolerance");
  add("angular_momentum", rep.angular_momentum, 1e-9, "tolerance");
  if (!rep.descent.tau.empty()) add("descent_rate", rep.descent.rate, rep.descent.expected_rate, "expected_rate");

  json doc = to_json(rep);
  doc["schema"] = "nbcoll-spin/1";
  doc["masses"] = sc.masses;
  doc["tolerances"] = {{"rtol", sc.spin.rtol}, {"atol", sc.spin.atol}, {"eq_threshold", sc.spin.eq_threshold}};
  write_atomic(path_in(sc.out_dir, "spin.csv"), series.str());
  write_atomic(path_in(sc.out_dir, "summary.csv"), summary.str());
  write_atomic(path_in(sc.out_dir, "summary.json"), doc.dump(2) + "\n");

  char buf[256];
  std::snprintf(buf, sizeof buf,
                "recipe %s: tau_end %.3f, T %.4f, %zu dyadic windows, tail bound %.3e (epsilon %.1e), %s\n",
                to_string(rep.recipe).c_str(), rep.tau_end, rep.T, rep.dyadic.size(), rep.tail_bound,
                rep.tail_epsilon, rep.converged ? "converged" : "not converged");
  out << buf;
  std::snprintf(buf, sizeof buf, "w limit (%.12f, %.12f, %.12f), sup|1/sigma2| %.4f, sup|sigma3/sigma2| %.4f\n",
                rep.w_limit[0], rep.w_limit[1], rep.w_limit[2], rep.sup_inv_sigma2, rep.sup_sigma_ratio);
  out << buf;
  return kSuccess;
}

int cmd_verify(std::uint64_t seed, const std::string& out_dir, std::ostream& out) {
  SuiteOptions opt;
  opt.seed = seed;
  const auto results = run_acceptance_suite(opt);
  CsvTable table({"criterion", "check", "required", "pass", "value", "threshold"});
  bool all = true;
  for (const auto& r : results) {
    out << format_summary(r) << '\n' << format_detail(r);
    all = all && r.pass();
    for (const auto& c : r.checks)
      table.add({std::to_string(r.id), "\"" + c.name + "\"", c.required ? "1" : "0", c.pass ? "1" : "0",
                 fmt(c.value), fmt(c.threshold)});
  }
  if (!out_dir.empty()) write_atomic(path_in(out_dir, "verify.csv"), table.str());
  return all ? kSuccess : kChecksFailed;
}

}  // namespace nbcoll::cli
