#include "fracdn/recon.hpp"

#include <algorithm>
#include <cmath>

#include "fracdn/dnmap.hpp"
#include "fracdn/errors.hpp"

namespace fracdn {

namespace {

constexpr double kFlatTail = 1e-13;
constexpr double kRowConsistency = 1e-10;

double tail_ratio(double q, double n1, double n2, double n3) {
  const double a = std::pow(n1, -q), b = std::pow(n2, -q), c = std::pow(n3, -q);
  return (b - c) / (a - b);
}

void fill_limits(ExperimentRecord& record) {
  std::vector<int> n;
  std::vector<double> pairing, energy;
  for (const ExperimentRow& row : record.rows) {
    n.push_back(row.n);
    pairing.push_back(row.pairing);
    energy.push_back(row.energy);
  }
  record.pairing_limit = extrapolate_limit(n, pairing);
  record.energy_limit = extrapolate_limit(n, energy);
  record.error = std::abs(record.pairing_limit.limit - record.target);
}

}  // namespace

Extrapolation extrapolate_limit(std::span<const int> n, std::span<const double> a) {
  if (n.size() != a.size()) throw ParameterError("extrapolation needs one value per N");
  Extrapolation out;
  if (a.empty()) {
    out.fallback = true;
    out.note = "no rows";
    return out;
  }
  out.limit = a.back();
  if (a.size() < 3) {
    out.fallback = true;
    out.note = "fewer than three rows";
    return out;
  }
  const std::size_t k = a.size();
  const double n1 = n[k - 3], n2 = n[k - 2], n3 = n[k - 1];
  const double d1 = a[k - 2] - a[k - 3];
  const double d2 = a[k - 1] - a[k - 2];
  const double scale = std::max({std::abs(a[k - 1]), std::abs(a[k - 2]), std::abs(a[k - 3])});
  if (std::abs(d1) <= kFlatTail * scale && std::abs(d2) <= kFlatTail * scale) {
    out.note = "tail flat to roundoff";
    return out;
  }
  if (!(n1 < n2 && n2 < n3)) throw ParameterError("N values must be strictly increasing");
  const double rho = d2 / d1;
  double lo = 1e-6, hi = 60.0;
  if (!(d1 * d2 > 0.0) || !(rho < tail_ratio(lo, n1, n2, n3)) || !(rho > tail_ratio(hi, n1, n2, n3))) {
    out.fallback = true;
    out.note = "non-monotone or non-contracting tail";
    return out;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tail_ratio(mid, n1, n2, n3) > rho) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double q = 0.5 * (lo + hi);
  const double amplitude = d2 / (std::pow(n3, -q) - std::pow(n2, -q));
  out.rate = q;
  out.limit = a[k - 1] - amplitude * std::pow(n3, -q);
  return out;
}

ExperimentRecord reconstruct_diagonal(const Coefficient& sigma, const DomainPtr& domain, const BumpProfile& profile,
                                      const TestSequenceConfig& sequence, const FracParams& params) {
  params.validate();
  ExperimentRecord record;
  record.x0 = sequence.x0;
  record.r0 = sequence.r0;
  record.h = domain->spacing();
  record.s = params.s;
  record.p = params.p;
  record.profile = profile.name();
  record.target = sigma.diagonal(sequence.x0);

  const BoundCoefficient bound = sigma.bind(domain);
  int previous = 0;
  for (int n : sequence.n_list) {
    try {
      if (n <= previous) throw ParameterError("N_list must be strictly increasing");
      previous = n;
      const GridFunction phi = normalize_phi(tensor_bump(profile, sequence.x0, sequence.r0, n, domain), params.s, params.p);
      SolveResult solve = solve_dirichlet(bound, phi, params);
      ExperimentRow row;
      row.n = n;
      row.iterations = solve.iterations;
      row.converged = solve.converged;
      row.epsilon_sensitivity = solve.epsilon_sensitivity;
      row.u_minus_phi_norm = sobolev_norm(solve.u - phi, params.s, params.p);
      const PairingDecomposition split = pairing_decomposition(bound, phi, params, std::move(solve));
      row.pairing = split.pairing;
      row.energy = split.energy_term;
      row.correction = split.correction_term;
      if (!std::isfinite(row.pairing) || !std::isfinite(row.energy) || !std::isfinite(row.correction) ||
          !std::isfinite(row.u_minus_phi_norm)) {
        throw NumericalError("non-finite entry in row N=" + std::to_string(n));
      }
      const double gap = std::abs(row.pairing - row.energy - row.correction);
      if (gap > kRowConsistency * std::max(std::abs(row.pairing), std::abs(row.energy))) record.inconsistent = true;
      record.nonconverged = record.nonconverged || !row.converged;
      record.rows.push_back(row);
    } catch (const Error& e) {
      record.failed = true;
      record.failure = "N=" + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  fill_limits(record);
  return record;
}

DeterminationReport exterior_determination(const Coefficient& sigma1, const Coefficient& sigma2,
                                           std::span<const Point> probe_points, const DomainPtr& domain,
                                           const BumpProfile& profile, const TestSequenceConfig& sequence,
                                           const FracParams& params, double tolerance) {
  DeterminationReport report;
  report.tolerance = tolerance;
  for (const Point& x0 : probe_points) {
    if (!domain->w_region().contains(x0, domain->dim())) throw ParameterError("probe point lies outside W");
    TestSequenceConfig local = sequence;
    local.x0 = x0;
    DeterminationProbe probe;
    probe.x0 = x0;
    probe.first = reconstruct_diagonal(sigma1, domain, profile, local, params);
    probe.second = reconstruct_diagonal(sigma2, domain, profile, local, params);
    probe.limit_discrepancy = std::abs(probe.first.pairing_limit.limit - probe.second.pairing_limit.limit);
    probe.diagonal_discrepancy = std::abs(sigma1.diagonal(x0) - sigma2.diagonal(x0));
    const std::size_t rows = std::min(probe.first.rows.size(), probe.second.rows.size());
    double scale = 1.0;
    for (std::size_t k = 0; k < rows; ++k) {
      probe.max_pairing_gap =
          std::max(probe.max_pairing_gap, std::abs(probe.first.rows[k].pairing - probe.second.rows[k].pairing));
      scale = std::max(scale, std::abs(probe.first.rows[k].pairing));
    }
    probe.pairings_agree = rows > 0 && probe.max_pairing_gap <= tolerance * scale;
    probe.consistent = !probe.pairings_agree || probe.limit_discrepancy <= tolerance * scale;
    report.probes.push_back(std::move(probe));
  }
  return report;
}

StabilityReport stability_probe(const Coefficient& sigma1, const Coefficient& sigma2, const DomainPtr& domain,
                                const BumpProfile& profile, const TestSequenceConfig& sequence,
                                const FracParams& params) {
  StabilityReport report;
  report.first = reconstruct_diagonal(sigma1, domain, profile, sequence, params);
  report.second = reconstruct_diagonal(sigma2, domain, profile, sequence, params);
  report.target = std::abs(sigma1.diagonal(sequence.x0) - sigma2.diagonal(sequence.x0));
  std::vector<int> n;
  const std::size_t rows = std::min(report.first.rows.size(), report.second.rows.size());
  for (std::size_t k = 0; k < rows; ++k) {
    n.push_back(report.first.rows[k].n);
    report.differences.push_back(std::abs(report.first.rows[k].pairing - report.second.rows[k].pairing));
    report.operator_norm_lower_bound = std::max(report.operator_norm_lower_bound, report.differences.back());
  }
  report.limit = extrapolate_limit(n, report.differences);
  report.error = std::abs(report.limit.limit - report.target);
  return report;
}

}  // namespace fracdn
