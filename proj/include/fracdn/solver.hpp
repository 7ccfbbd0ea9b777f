#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fracdn/coefficient.hpp"
#include "fracdn/grid.hpp"
#include "fracdn/quadrature.hpp"

namespace fracdn {

struct FracParams {
  double s = 0.5;
  double p = 2.0;
  /// Smoothing of |t|^{p-2} t for p < 2. Unset means 1e-6 (max|f| + 1) at
  /// solve time; must be zero or unset when p >= 2.
  std::optional<double> epsilon_reg;
  /// Stop when the gradient sup-norm is below gradient_tol * (1 + |E|).
  double gradient_tol = 1e-9;
  int max_iterations = 20000;
  /// For p < 2, re-solve at eps/10 and report the difference.
  bool epsilon_sensitivity = true;

  /// Throws ParameterError naming the offending field.
  void validate() const;
  /// The regularization actually used for exterior data f.
  double resolved_epsilon(const GridFunction& f) const;
  PowerLaw law(double eps) const { return PowerLaw{p, eps}; }
};

struct SolveResult {
  /// Full-grid solution; equals f outside Omega.
  GridFunction u;
  /// E_{s,p,sigma}(u), unregularized.
  double energy = 0.0;
  int iterations = 0;
  /// Sup-norm of the (regularized) first variation over Omega nodes.
  double gradient_norm = 0.0;
  bool converged = false;
  double epsilon = 0.0;
  /// ||u_eps - u_{eps/10}||_{W^{s,p}} when p < 2 and requested.
  std::optional<double> epsilon_sensitivity;
  /// Iterations where the nonmonotone line search gave up and a fixed step
  /// was taken.
  int fallback_steps = 0;
};

/// sum_{i != j} sigma_ij |v_i - v_j|^p h^{2n} / |x_i - x_j|^{n+sp}
double energy(const GridFunction& v, const BoundCoefficient& sigma, const FracParams& params);
double energy(const GridFunction& v, const Coefficient& sigma, const FracParams& params);
/// Same pair sum with |t|^p replaced by (t^2 + eps^2)^{p/2} - eps^p.
double regularized_energy(const GridFunction& v, const BoundCoefficient& sigma, const FracParams& params,
                          double eps);

/// Gradient of the (regularized) energy with respect to the Omega node
/// values; zero at every other node. Component k is
/// p * sum_{j != k} (sigma_kj + sigma_jk) m_eps(v_k - v_j) w_kj.
GridFunction energy_gradient(const GridFunction& v, const BoundCoefficient& sigma, const FracParams& params,
                             double eps = 0.0);

/// Minimizes the energy over {u : u = f outside Omega} with Barzilai-Borwein
/// steps safeguarded by a nonmonotone line search. Non-convergence is
/// reported through SolveResult::converged, never thrown.
SolveResult solve_dirichlet(const BoundCoefficient& sigma, const GridFunction& f, const FracParams& params,
                            const GridFunction* initial_guess = nullptr);

struct SolutionEstimateReport {
  bool degenerate = false;  ///< [u] = [f] = 0
  double ratio = 0.0;       ///< [u]_{W^{s,p}} / [f]_{W^{s,p}}
  double bound = 0.0;       ///< C(lambda, p)
  bool within_bound = true; ///< a warning when false, not an error
};

/// [u] / [f] with f as given (any extension of the exterior data).
/// The Young-inequality constant C(lambda, p) = (2 C_{lambda/2} lambda^{-p} / lambda)^{1/p}
/// with C_eps = (eps p')^{-(p-1)} / p.
double solution_estimate_constant(double lambda, double p);
SolutionEstimateReport check_solution_estimate(const SolveResult& result, const GridFunction& f,
                                               const FracParams& params, double lambda);

struct MonotonicityReport {
  double p = 2.0;
  std::size_t samples = 0;
  /// Infimum of the superquadratic (p >= 2) or subquadratic (p < 2) ratio.
  double lower_infimum = 0.0;
  /// Supremum of the Hoelder-type continuity ratio.
  double upper_supremum = 0.0;
  /// Largest relative change of either ratio under (x, y) -> (a x, a y).
  double scale_deviation = 0.0;
  std::size_t non_finite = 0;
  std::string lower_form;
};

/// Monte-Carlo measurement of the constants c_p and C_p of the vector
/// inequalities
///   (|x|^{p-2}x - |y|^{p-2}y).(x-y) >= c_p |x-y|^p                  (p >= 2)
///   (|x|^{p-2}x - |y|^{p-2}y).(x-y) >= c_p |x-y|^2 / (|x|+|y|)^{2-p} (p < 2)
///   | |x|^{p-2}x - |y|^{p-2}y | <= C_p (|x|+|y|)^{p-2} |x-y|
/// over vectors in dimensions 1..3 with magnitudes spanning 1e-6..1e6.
MonotonicityReport monotonicity_check(double p, std::size_t sample_count, std::uint64_t seed);

}  // namespace fracdn
