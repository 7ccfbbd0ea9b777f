#include "fracdn/runner.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "fracdn/dnmap.hpp"
#include "fracdn/records.hpp"
#include "fracdn/recon.hpp"

namespace fracdn {

using nlohmann::json;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

json record_summary(const ExperimentRecord& r) {
  return json{{"label", r.label},
              {"x0", r.x0},
              {"h", r.h},
              {"target", r.target},
              {"pairing_limit", r.pairing_limit},
              {"energy_limit", r.energy_limit},
              {"error", r.error},
              {"flags",
               {{"extrapolation_fallback", r.pairing_limit.fallback},
                {"failed", r.failed},
                {"nonconverged", r.nonconverged},
                {"inconsistent", r.inconsistent}}},
              {"failure", r.failure}};
}

void log_record(std::ostream& log, const ExperimentRecord& r) {
  for (const ExperimentRow& row : r.rows) {
    log << r.label << " N=" << row.n << " pairing=" << format_double(row.pairing)
        << " energy=" << format_double(row.energy) << " correction=" << format_double(row.correction)
        << " iterations=" << row.iterations << (row.converged ? "" : " NOT CONVERGED") << "\n";
  }
  if (r.failed) log << r.label << " FAILED: " << r.failure << "\n";
}

int record_exit(const ExperimentRecord& r) {
  if (r.nonconverged) return kExitNonConvergence;
  if (r.failed || r.inconsistent) return kExitInconsistent;
  return kExitSuccess;
}

int combine(int a, int b) {
  if (a == kExitNonConvergence || b == kExitNonConvergence) return kExitNonConvergence;
  return a != kExitSuccess ? a : b;
}

GridFunction make_data(const DataSpec& spec, const RunConfig& config, const DomainPtr& domain, std::uint64_t stream) {
  if (spec.kind == DataSpec::Kind::kBump) {
    const BumpProfile profile = BumpProfile::from_name(config.profile);
    return normalize_phi(tensor_bump(profile, config.sequence.x0, config.sequence.r0, spec.n, domain),
                         config.params.s, config.params.p);
  }
  std::mt19937_64 rng(config.seed + stream);
  std::uniform_real_distribution<double> dist(-spec.amplitude, spec.amplitude);
  std::vector<double> values;
  for (std::size_t k = 0; k < domain->w_set().size(); ++k) values.push_back(dist(rng));
  return zero_extension(domain, values);
}

std::string data_id(const DataSpec& spec) {
  return spec.kind == DataSpec::Kind::kBump ? "phi_" + std::to_string(spec.n) : "random";
}

void run_records(const std::vector<ExperimentRecord>& records, RunOutcome& out, std::ostream& log) {
  for (const ExperimentRecord& r : records) {
    log_record(log, r);
    out.records["records"].push_back(r);
    out.summary["experiments"].push_back(record_summary(r));
    out.csv[r.label + ".csv"] = experiment_csv(r);
    out.exit_code = combine(out.exit_code, record_exit(r));
  }
}

void run_seminorm_check(const RunConfig& config, const DomainPtr& domain, RunOutcome& out) {
  const BumpProfile profile = BumpProfile::from_name(config.profile);
  const double p = config.params.p;
  const int n = domain->dim();
  std::string csv = "N,lp_norm,lp_ratio,lp_predicted,t,seminorm,seminorm_ratio,seminorm_predicted,phi_seminorm\n";
  double lp_first = 0.0;
  std::vector<double> semi_first(config.seminorm_orders.size(), 0.0);
  double worst_scaling = 0.0, worst_normalization = 0.0;
  for (int big_n : config.sequence.n_list) {
    const GridFunction psi = tensor_bump(profile, config.sequence.x0, config.sequence.r0, big_n, domain);
    const double lp = lp_norm(psi, p);
    const double phi_semi = gagliardo_seminorm(normalize_phi(psi, config.params.s, p), config.params.s, p);
    worst_normalization = std::max(worst_normalization, std::abs(phi_semi - 1.0));
    if (lp_first == 0.0) lp_first = lp;
    const double scale = static_cast<double>(big_n) / config.sequence.n_list.front();
    const double lp_pred = std::pow(scale, -n / p);
    for (std::size_t k = 0; k < config.seminorm_orders.size(); ++k) {
      const double t = config.seminorm_orders[k];
      const double semi = gagliardo_seminorm(psi, t, p);
      if (semi_first[k] == 0.0) semi_first[k] = semi;
      const double semi_pred = std::pow(scale, t - n / p);
      worst_scaling = std::max({worst_scaling, std::abs(lp / lp_first / lp_pred - 1.0),
                                std::abs(semi / semi_first[k] / semi_pred - 1.0)});
      csv += std::to_string(big_n) + "," + format_double(lp) + "," + format_double(lp / lp_first) + "," +
             format_double(lp_pred) + "," + format_double(t) + "," + format_double(semi) + "," +
             format_double(semi / semi_first[k]) + "," + format_double(semi_pred) + "," + format_double(phi_semi) +
             "\n";
    }
  }
  out.csv["seminorm.csv"] = csv;
  out.summary["max_scaling_deviation"] = worst_scaling;
  out.summary["max_normalization_deviation"] = worst_normalization;
  if (worst_normalization > 1e-12) out.exit_code = kExitInconsistent;
}

void run_solve(const RunConfig& config, const DomainPtr& domain, RunOutcome& out, std::ostream& log) {
  const Coefficient sigma = build_coefficient(config.coefficient, domain, config.base_dir);
  const BoundCoefficient bound = sigma.bind(domain);
  const GridFunction f = make_data(config.data_f, config, domain, 0);
  const SolveResult r = solve_dirichlet(bound, f, config.params);
  const SolutionEstimateReport est = check_solution_estimate(r, f, config.params, sigma.lambda());
  log << "solve iterations=" << r.iterations << " gradient=" << format_double(r.gradient_norm)
      << (r.converged ? "" : " NOT CONVERGED") << "\n";
  if (!est.within_bound) log << "warning: [u]/[f] = " << est.ratio << " exceeds C = " << est.bound << "\n";
  // Residual diagnostic at Omega nodes, for the solution and for the data.
  double residual_u = 0.0, residual_f = 0.0;
  const GridFunction f_ext = exterior_part(f);
  for (std::size_t i : domain->omega()) {
    residual_u = std::max(residual_u, std::abs(pointwise_p_laplacian(r.u, config.params.s, config.params.p, i,
                                                                     config.normalization_constant)));
    residual_f = std::max(residual_f, std::abs(pointwise_p_laplacian(f_ext, config.params.s, config.params.p, i,
                                                                     config.normalization_constant)));
  }
  json s = {{"energy", r.energy},
            {"residual_max", residual_u},
            {"data_residual_max", residual_f},
            {"trivial_energy", energy(exterior_part(f), bound, config.params)},
            {"iterations", r.iterations},
            {"gradient_norm", r.gradient_norm},
            {"converged", r.converged},
            {"epsilon", r.epsilon},
            {"epsilon_sensitivity", r.epsilon_sensitivity ? json(*r.epsilon_sensitivity) : json(nullptr)},
            {"estimate", {{"ratio", est.ratio}, {"bound", est.bound}, {"degenerate", est.degenerate},
                          {"within_bound", est.within_bound}}}};
  out.records["solve"] = s;
  out.summary["solve"] = s;
  std::string csv = "node,x,y,f,u\n";
  for (std::size_t i = 0; i < domain->size(); ++i) {
    const Point x = domain->point(i);
    csv += std::to_string(i) + "," + format_double(x[0]) + "," + format_double(x[1]) + "," + format_double(f[i]) +
           "," + format_double(r.u[i]) + "\n";
  }
  out.csv["solution.csv"] = csv;
  if (!r.converged) out.exit_code = kExitNonConvergence;
}

void run_pair(const RunConfig& config, const DomainPtr& domain, RunOutcome& out, std::ostream& log) {
  const Coefficient sigma = build_coefficient(config.coefficient, domain, config.base_dir);
  const BoundCoefficient bound = sigma.bind(domain);
  const GridFunction f = make_data(config.data_f, config, domain, 0);
  const GridFunction g = make_data(config.data_g, config, domain, 1);
  SolveResult solve = solve_dirichlet(bound, f, config.params);
  const double value = dn_pairing_value(bound, solve, g, config.params);
  // Gauge probe: the pairing must not see Omega values of g.
  std::mt19937_64 rng(config.seed + 2);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridFunction perturbed = g;
  for (std::size_t i : domain->omega()) perturbed[i] += dist(rng);
  const double gauge = std::abs(dn_pairing_value(bound, solve, perturbed, config.params) - value);
  log << "pair value=" << format_double(value) << " gauge_delta=" << format_double(gauge)
      << (solve.converged ? "" : " NOT CONVERGED") << "\n";
  json s = {{"f_id", data_id(config.data_f)},
            {"g_id", data_id(config.data_g)},
            {"value", value},
            {"energy_u", solve.energy},
            {"gauge_delta", gauge},
            {"iterations", solve.iterations},
            {"converged", solve.converged}};
  out.records["pairing"] = s;
  out.summary["pairing"] = s;
  out.csv["pairing.csv"] = "f_id,g_id,value,energy_u,gauge_delta,iterations,converged\n" + data_id(config.data_f) +
                           "," + data_id(config.data_g) + "," + format_double(value) + "," +
                           format_double(solve.energy) + "," + format_double(gauge) + "," +
                           std::to_string(solve.iterations) + "," + (solve.converged ? "true" : "false") + "\n";
  if (!solve.converged) out.exit_code = kExitNonConvergence;
}

}  // namespace

RunOutcome execute(const RunConfig& config, std::ostream& log) {
  RunOutcome out;
  out.records = json::object();
  out.summary = json{{"experiment", experiment_name(config.experiment)}};
  out.records["experiment"] = experiment_name(config.experiment);
  const std::string snapshot = config.document.dump();

  if (config.experiment == ExperimentKind::kVerifyInequalities) {
    const MonotonicityReport r = monotonicity_check(config.inequalities.p, config.inequalities.samples, config.seed);
    json s = {{"p", r.p},
              {"samples", r.samples},
              {"lower_form", r.lower_form},
              {"lower_infimum", r.lower_infimum},
              {"upper_supremum", r.upper_supremum},
              {"scale_deviation", r.scale_deviation},
              {"non_finite", r.non_finite}};
    out.records["inequalities"] = s;
    out.summary["inequalities"] = s;
    out.csv["inequalities.csv"] = "p,samples,lower_form,lower_infimum,upper_supremum,scale_deviation,non_finite\n" +
                                  format_double(r.p) + "," + std::to_string(r.samples) + "," + r.lower_form + "," +
                                  format_double(r.lower_infimum) + "," + format_double(r.upper_supremum) + "," +
                                  format_double(r.scale_deviation) + "," + std::to_string(r.non_finite) + "\n";
    log << "inequalities p=" << r.p << " infimum=" << format_double(r.lower_infimum)
        << " supremum=" << format_double(r.upper_supremum) << "\n";
    if (!(r.lower_infimum > 0.0) || !std::isfinite(r.upper_supremum) || r.non_finite > 0 ||
        r.scale_deviation > 1e-10) {
      out.exit_code = kExitInconsistent;
    }
    out.summary["exit_code"] = out.exit_code;
    return out;
  }

  const DomainPtr domain = build_domain(config);
  out.summary["grid"] = {{"dim", domain->dim()}, {"R", domain->half_width()}, {"h", domain->spacing()},
                         {"nodes", domain->size()}};
  log << experiment_name(config.experiment) << " on " << domain->size() << " nodes, h=" << domain->spacing()
      << ", R=" << domain->half_width() << "\n";
  const BumpProfile profile = BumpProfile::from_name(config.profile);

  switch (config.experiment) {
    case ExperimentKind::kSeminormCheck:
      run_seminorm_check(config, domain, out);
      break;
    case ExperimentKind::kSolve:
      run_solve(config, domain, out, log);
      break;
    case ExperimentKind::kPair:
      run_pair(config, domain, out, log);
      break;
    case ExperimentKind::kReconstruct: {
      const Coefficient sigma = build_coefficient(config.coefficient, domain, config.base_dir);
      ExperimentRecord r = reconstruct_diagonal(sigma, domain, profile, config.sequence, config.params);
      r.label = "reconstruct";
      r.config_snapshot = snapshot;
      run_records({r}, out, log);
      break;
    }
    case ExperimentKind::kDetermine: {
      const Coefficient s1 = build_coefficient(config.coefficient, domain, config.base_dir);
      const Coefficient s2 = build_coefficient(config.coefficient2, domain, config.base_dir, "coefficient2");
      DeterminationReport rep =
          exterior_determination(s1, s2, config.probe_points, domain, profile, config.sequence, config.params);
      std::string csv = "x0,limit1,limit2,limit_discrepancy,diagonal_discrepancy,max_pairing_gap,pairings_agree,"
                        "consistent\n";
      for (std::size_t k = 0; k < rep.probes.size(); ++k) {
        DeterminationProbe& probe = rep.probes[k];
        probe.first.label = "probe" + std::to_string(k) + "_sigma1";
        probe.second.label = "probe" + std::to_string(k) + "_sigma2";
        probe.first.config_snapshot = probe.second.config_snapshot = snapshot;
        run_records({probe.first, probe.second}, out, log);
        csv += format_double(probe.x0[0]) + (domain->dim() == 2 ? " " + format_double(probe.x0[1]) : "") + "," +
               format_double(probe.first.pairing_limit.limit) + "," +
               format_double(probe.second.pairing_limit.limit) + "," + format_double(probe.limit_discrepancy) +
               "," + format_double(probe.diagonal_discrepancy) + "," + format_double(probe.max_pairing_gap) + "," +
               (probe.pairings_agree ? "true" : "false") + "," + (probe.consistent ? "true" : "false") + "\n";
        out.summary["comparison"].push_back({{"x0", probe.x0},
                                             {"limit_discrepancy", probe.limit_discrepancy},
                                             {"diagonal_discrepancy", probe.diagonal_discrepancy},
                                             {"max_pairing_gap", probe.max_pairing_gap},
                                             {"pairings_agree", probe.pairings_agree},
                                             {"consistent", probe.consistent}});
        if (!probe.consistent) out.exit_code = combine(out.exit_code, kExitInconsistent);
      }
      out.csv["comparison.csv"] = csv;
      break;
    }
    case ExperimentKind::kStability: {
      const Coefficient s1 = build_coefficient(config.coefficient, domain, config.base_dir);
      const Coefficient s2 = build_coefficient(config.coefficient2, domain, config.base_dir, "coefficient2");
      StabilityReport rep = stability_probe(s1, s2, domain, profile, config.sequence, config.params);
      rep.first.label = "sigma1";
      rep.second.label = "sigma2";
      rep.first.config_snapshot = rep.second.config_snapshot = snapshot;
      run_records({rep.first, rep.second}, out, log);
      std::string csv = "N,difference\n";
      for (std::size_t k = 0; k < rep.differences.size(); ++k) {
        csv += std::to_string(rep.first.rows[k].n) + "," + format_double(rep.differences[k]) + "\n";
      }
      out.csv["stability.csv"] = csv;
      out.summary["stability"] = {{"differences", rep.differences},
                                  {"limit", rep.limit},
                                  {"target", rep.target},
                                  {"error", rep.error},
                                  {"operator_norm_lower_bound", rep.operator_norm_lower_bound}};
      break;
    }
    case ExperimentKind::kVerifyInequalities:
      break;
  }
  out.summary["exit_code"] = out.exit_code;
  return out;
}

std::string summary_table(const json& summary) {
  std::string out = "experiment: " + summary.value("experiment", std::string("?")) + "\n";
  if (summary.contains("experiments")) {
    for (const json& e : summary["experiments"]) {
      const json& lim = e["pairing_limit"];
      const double target = e["target"].get<double>();
      const double energy_limit = e["energy_limit"]["limit"].get<double>();
      out += "  " + e.value("label", std::string()) + ": target " + fmt("%.12g", target) + "  pairing limit " +
             fmt("%.12g", lim["limit"].get<double>()) + " (error " + fmt("%.3e", e["error"].get<double>()) +
             ")  energy limit " + fmt("%.12g", energy_limit) + " (error " +
             fmt("%.3e", std::abs(energy_limit - target)) + ")" +
             (lim["fallback"].get<bool>() ? "  [extrapolation fallback]" : "") +
             (e["flags"]["failed"].get<bool>() ? "  [FAILED]" : "") +
             (e["flags"]["nonconverged"].get<bool>() ? "  [NOT CONVERGED]" : "") +
             (e["flags"]["inconsistent"].get<bool>() ? "  [INCONSISTENT]" : "") + "\n";
    }
  }
  if (summary.contains("comparison")) {
    for (const json& c : summary["comparison"]) {
      out += "  probe " + c["x0"].dump() + ": |limit1 - limit2| " +
             fmt("%.3e", c["limit_discrepancy"].get<double>()) + "  |Sigma1 - Sigma2| " +
             fmt("%.3e", c["diagonal_discrepancy"].get<double>()) + "\n";
    }
  }
  if (summary.contains("stability")) {
    const json& s = summary["stability"];
    out += "  stability: limit " + fmt("%.12g", s["limit"]["limit"].get<double>()) + "  target " +
           fmt("%.12g", s["target"].get<double>()) + "  error " + fmt("%.3e", s["error"].get<double>()) + "\n";
  }
  for (const char* key : {"solve", "pairing", "inequalities"}) {
    if (summary.contains(key)) out += std::string("  ") + key + ": " + summary[key].dump() + "\n";
  }
  if (summary.contains("max_scaling_deviation")) {
    out += "  max scaling deviation " + fmt("%.3e", summary["max_scaling_deviation"].get<double>()) +
           "  max |[Phi_N] - 1| " + fmt("%.3e", summary["max_normalization_deviation"].get<double>()) + "\n";
  }
  return out;
}

}  // namespace fracdn
