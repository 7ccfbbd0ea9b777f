#pragma once

#include <span>
#include <string>

#include "fracdn/coefficient.hpp"
#include "fracdn/grid.hpp"
#include "fracdn/solver.hpp"

namespace fracdn {

struct PairingRecord {
  std::string f_id;
  std::string g_id;
  /// <Lambda_sigma f, g>
  double value = 0.0;
  /// Solve of u_f, including u_f itself.
  SolveResult solve;
};

/// sum_{i != j} sigma_ij m(u_i - u_j) (g_i - g_j) h^{2n} / |x_i - x_j|^{n+sp}
/// with m the flux used by the solve (regularized when p < 2). g may carry
/// an Omega part; the value does not depend on it up to solver tolerance.
double dn_pairing_value(const BoundCoefficient& sigma, const SolveResult& solve, const GridFunction& g,
                        const FracParams& params);

/// Solves for u_f and pairs it with g. f must vanish on Omega. Throws
/// ConvergenceError when the solve does not converge.
PairingRecord dn_pairing(const BoundCoefficient& sigma, const GridFunction& f, const GridFunction& g,
                         const FracParams& params, std::string f_id = "f", std::string g_id = "g");

struct DnNormReport {
  std::size_t pairs = 0;
  /// sup |<Lambda f, g>| / (||f||^{p-1} ||g||), full W^{s,p} norms of the
  /// zero extensions.
  double sup_ratio = 0.0;
  /// Same with Gagliardo seminorms in place of norms.
  double sup_seminorm_ratio = 0.0;
  bool finite = true;
};

/// Pairs every sample with every sample (including itself).
DnNormReport dn_norm_probe(const BoundCoefficient& sigma, const FracParams& params,
                           std::span<const GridFunction> sample_fs);

struct PairingDecomposition {
  double pairing = 0.0;
  /// E_{s,p,sigma}(phi)
  double energy_term = 0.0;
  /// sum sigma (m(d u) d phi - |d phi|^p) w, summed directly.
  double correction_term = 0.0;
  SolveResult solve;
};

/// Splits <Lambda phi, phi> into the energy of phi and the correction.
PairingDecomposition pairing_decomposition(const BoundCoefficient& sigma, const GridFunction& phi,
                                           const FracParams& params);
/// Same for an already computed solve with exterior data phi.
PairingDecomposition pairing_decomposition(const BoundCoefficient& sigma, const GridFunction& phi,
                                           const FracParams& params, SolveResult solve);

}  // namespace fracdn
