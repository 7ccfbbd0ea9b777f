#include "fracdn/dnmap.hpp"

#include <cmath>

#include "fracdn/errors.hpp"
#include "fracdn/parallel.hpp"

namespace fracdn {

namespace {

struct SupportMask {
  std::vector<std::size_t> nodes;
  std::vector<unsigned char> mask;

  explicit SupportMask(const GridFunction& g) : nodes(g.support()), mask(g.size(), 0) {
    for (std::size_t i : nodes) mask[i] = 1;
  }
};

void check_same_domain(const GridFunction& a, const GridFunction& b) {
  if (a.domain_ptr() != b.domain_ptr()) throw ParameterError("grid functions live on different domains");
}

}  // namespace

double dn_pairing_value(const BoundCoefficient& sigma, const SolveResult& solve, const GridFunction& g,
                        const FracParams& params) {
  params.validate();
  const GridFunction& u = solve.u;
  check_same_domain(u, g);
  const PairKernel kernel = PairKernel::for_order(u.domain_ptr(), params.s, params.p);
  const PowerLaw law = params.law(solve.epsilon);
  const SupportMask support(g);
  const std::size_t m = u.size();
  // Pairs with g_i = g_j = 0 vanish. A pair leaving supp(g) is counted for
  // both orderings through the oddness of the flux.
  return deterministic_sum(support.nodes.size(), [&](std::size_t a) {
    const std::size_t i = support.nodes[a];
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double w = kernel(i, j);
      if (support.mask[j]) {
        acc += sigma(i, j) * law.flux(u[i] - u[j]) * (g[i] - g[j]) * w;
      } else {
        acc += sigma.symmetric(i, j) * law.flux(u[i] - u[j]) * g[i] * w;
      }
    }
    return acc;
  });
}

PairingRecord dn_pairing(const BoundCoefficient& sigma, const GridFunction& f, const GridFunction& g,
                         const FracParams& params, std::string f_id, std::string g_id) {
  check_same_domain(f, g);
  if (!f.is_exterior_supported()) throw ParameterError("exterior data f must vanish on Omega");
  PairingRecord record;
  record.f_id = std::move(f_id);
  record.g_id = std::move(g_id);
  record.solve = solve_dirichlet(sigma, f, params);
  if (!record.solve.converged) {
    throw ConvergenceError("solve for " + record.f_id + " did not converge in " +
                           std::to_string(record.solve.iterations) + " iterations");
  }
  record.value = dn_pairing_value(sigma, record.solve, g, params);
  if (!std::isfinite(record.value)) throw NumericalError("pairing is not finite");
  return record;
}

DnNormReport dn_norm_probe(const BoundCoefficient& sigma, const FracParams& params,
                           std::span<const GridFunction> sample_fs) {
  std::vector<SolveResult> solves;
  std::vector<double> norms, seminorms;
  for (const GridFunction& f : sample_fs) {
    if (f.max_abs() == 0.0) throw ParameterError("dn_norm_probe samples must be nonzero");
    if (!f.is_exterior_supported()) throw ParameterError("dn_norm_probe samples must vanish on Omega");
    SolveResult r = solve_dirichlet(sigma, f, params);
    if (!r.converged) throw ConvergenceError("dn_norm_probe solve did not converge");
    solves.push_back(std::move(r));
    norms.push_back(sobolev_norm(f, params.s, params.p));
    seminorms.push_back(gagliardo_seminorm(f, params.s, params.p));
  }
  DnNormReport report;
  for (std::size_t a = 0; a < sample_fs.size(); ++a) {
    for (std::size_t b = 0; b < sample_fs.size(); ++b) {
      const double value = std::abs(dn_pairing_value(sigma, solves[a], sample_fs[b], params));
      const double ratio = value / (std::pow(norms[a], params.p - 1.0) * norms[b]);
      const double semi = value / (std::pow(seminorms[a], params.p - 1.0) * seminorms[b]);
      report.finite = report.finite && std::isfinite(ratio) && std::isfinite(semi);
      report.sup_ratio = std::max(report.sup_ratio, ratio);
      report.sup_seminorm_ratio = std::max(report.sup_seminorm_ratio, semi);
      ++report.pairs;
    }
  }
  return report;
}

PairingDecomposition pairing_decomposition(const BoundCoefficient& sigma, const GridFunction& phi,
                                           const FracParams& params) {
  SolveResult solve = solve_dirichlet(sigma, phi, params);
  if (!solve.converged) throw ConvergenceError("solve for phi did not converge");
  return pairing_decomposition(sigma, phi, params, std::move(solve));
}

PairingDecomposition pairing_decomposition(const BoundCoefficient& sigma, const GridFunction& phi,
                                           const FracParams& params, SolveResult solve) {
  params.validate();
  check_same_domain(solve.u, phi);
  PairingDecomposition out;
  out.pairing = dn_pairing_value(sigma, solve, phi, params);
  out.energy_term = energy(phi, sigma, params);

  const GridFunction& u = solve.u;
  const PairKernel kernel = PairKernel::for_order(u.domain_ptr(), params.s, params.p);
  const PowerLaw law = params.law(solve.epsilon);
  const PowerLaw exact = params.law(0.0);
  const SupportMask support(phi);
  const std::size_t m = u.size();
  out.correction_term = deterministic_sum(support.nodes.size(), [&](std::size_t a) {
    const std::size_t i = support.nodes[a];
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double w = kernel(i, j);
      if (support.mask[j]) {
        const double d = phi[i] - phi[j];
        acc += sigma(i, j) * (law.flux(u[i] - u[j]) * d - exact.value(d)) * w;
      } else {
        acc += sigma.symmetric(i, j) * (law.flux(u[i] - u[j]) * phi[i] - exact.value(phi[i])) * w;
      }
    }
    return acc;
  });
  out.solve = std::move(solve);
  return out;
}

}  // namespace fracdn
