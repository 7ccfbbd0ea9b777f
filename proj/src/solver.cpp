#include "fracdn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "fracdn/errors.hpp"
#include "fracdn/parallel.hpp"

namespace fracdn {

namespace {

// value and flux of the power law from a single pow
struct LawPair {
  double value;
  double flux;
};

inline LawPair evaluate_law(const PowerLaw& law, double eps_p, double t) {
  if (law.p == 2.0) return {t * t, t};
  const double r2 = t * t + law.eps * law.eps;
  if (r2 == 0.0) return {0.0, 0.0};
  double a;
  if (law.p == 3.0 && law.eps == 0.0) {
    a = std::abs(t);
  } else if (law.p == 4.0) {
    a = r2;
  } else {
    a = std::pow(r2, 0.5 * (law.p - 2.0));
  }
  return {a * r2 - eps_p, a * t};
}

double pair_energy(const GridFunction& v, const BoundCoefficient& sigma, const PowerLaw& law, double s) {
  const PairKernel kernel = PairKernel::for_order(v.domain_ptr(), s, law.p);
  const std::vector<std::size_t> active = v.support();
  std::vector<unsigned char> mask(v.size(), 0);
  for (std::size_t i : active) mask[i] = 1;
  const std::size_t m = v.size();
  return deterministic_sum(active.size(), [&](std::size_t a) {
    const std::size_t i = active[a];
    double inside = 0.0;
    double outside = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double w = kernel(i, j);
      if (mask[j]) {
        inside += sigma(i, j) * law.value(v[i] - v[j]) * w;
      } else {
        outside += sigma.symmetric(i, j) * w;
      }
    }
    return inside + law.value(v[i]) * outside;
  });
}

void check_domain(const GridFunction& v, const BoundCoefficient& sigma) {
  if (!v.domain_ptr() || v.domain_ptr() != sigma.domain()) {
    throw ParameterError("coefficient is bound to a different domain");
  }
}

// Energy restricted to the Omega unknowns x, with the exterior values frozen.
// F = Omega nodes, D = exterior nodes with nonzero data, Z = remaining nodes.
class ReducedProblem {
 public:
  ReducedProblem(const BoundCoefficient& sigma, const GridFunction& f, double s, PowerLaw law)
      : law_(law), eps_p_(law.eps > 0.0 ? std::pow(law.eps, law.p) : 0.0) {
    const GridDomain& d = f.domain();
    const PairKernel kernel = PairKernel::for_order(f.domain_ptr(), s, law.p);
    free_ = d.omega();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d.in_omega(i) && f[i] != 0.0) {
        data_nodes_.push_back(i);
        data_.push_back(f[i]);
      }
    }
    const std::size_t m = free_.size();
    const std::size_t nd = data_nodes_.size();
    std::vector<unsigned char> zero_mask(d.size(), 1);
    for (std::size_t i : free_) zero_mask[i] = 0;
    for (std::size_t i : data_nodes_) zero_mask[i] = 0;

    cff_.assign(m * m, 0.0);
    cfd_.assign(m * nd, 0.0);
    mass_.assign(m, 0.0);
    parallel_blocks(m, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t i = free_[k];
        for (std::size_t l = 0; l < m; ++l) {
          if (l != k) cff_[k * m + l] = sigma.symmetric(i, free_[l]) * kernel(i, free_[l]);
        }
        for (std::size_t q = 0; q < nd; ++q) {
          cfd_[k * nd + q] = sigma.symmetric(i, data_nodes_[q]) * kernel(i, data_nodes_[q]);
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < d.size(); ++j) {
          if (zero_mask[j]) acc += sigma.symmetric(i, j) * kernel(i, j);
        }
        mass_[k] = acc;
      }
    });
  }

  std::size_t size() const { return free_.size(); }
  const std::vector<std::size_t>& free_nodes() const { return free_; }

  /// Returns the variable part of the energy and fills grad.
  double evaluate(const std::vector<double>& x, std::vector<double>& grad) const {
    const std::size_t m = free_.size();
    const std::size_t nd = data_nodes_.size();
    std::vector<double> row_energy(m, 0.0);
    grad.assign(m, 0.0);
    parallel_blocks(m, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const double xk = x[k];
        double e_free = 0.0, e_rest = 0.0, g = 0.0;
        const double* c = &cff_[k * m];
        for (std::size_t l = 0; l < m; ++l) {
          if (c[l] == 0.0) continue;
          const LawPair lp = evaluate_law(law_, eps_p_, xk - x[l]);
          e_free += c[l] * lp.value;
          g += c[l] * lp.flux;
        }
        const double* cd = nd ? &cfd_[k * nd] : nullptr;
        for (std::size_t q = 0; q < nd; ++q) {
          const LawPair lp = evaluate_law(law_, eps_p_, xk - data_[q]);
          e_rest += cd[q] * lp.value;
          g += cd[q] * lp.flux;
        }
        const LawPair lp = evaluate_law(law_, eps_p_, xk);
        e_rest += mass_[k] * lp.value;
        g += mass_[k] * lp.flux;
        row_energy[k] = 0.5 * e_free + e_rest;
        grad[k] = law_.p * g;
      }
    });
    double total = 0.0;
    for (double e : row_energy) total += e;
    return total;
  }

 private:
  PowerLaw law_;
  double eps_p_;
  std::vector<std::size_t> free_;
  std::vector<std::size_t> data_nodes_;
  std::vector<double> data_;
  std::vector<double> cff_;
  std::vector<double> cfd_;
  std::vector<double> mass_;
};

double sup_norm(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * b[i];
  return out;
}

struct DescentOutcome {
  std::vector<double> x;
  double energy_var = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  int fallback_steps = 0;
  bool converged = false;
};

constexpr std::size_t kNonmonotoneMemory = 10;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr int kMaxStalls = 5;

DescentOutcome descend(const ReducedProblem& problem, std::vector<double> x, double offset, double scale,
                       const FracParams& params) {
  DescentOutcome out;
  const std::size_t m = problem.size();
  std::vector<double> g, g_new, x_new(m), best_x = x;
  double e = problem.evaluate(x, g);
  double best_e = e;
  double best_gnorm = sup_norm(g);
  auto is_converged = [&](double gnorm, double evar) {
    return gnorm <= params.gradient_tol * (1.0 + std::abs(evar + offset));
  };
  out.gradient_norm = best_gnorm;
  if (m == 0 || is_converged(best_gnorm, e)) {
    out.x = std::move(x);
    out.energy_var = e;
    out.converged = true;
    return out;
  }

  std::deque<double> history{e};
  const double initial_step = 0.1 * scale / best_gnorm;
  double alpha = initial_step;
  int stalls = 0;
  int it = 0;
  while (it < params.max_iterations) {
    ++it;
    const double gg = dot(g, g);
    const double reference = *std::max_element(history.begin(), history.end());
    const double slack = 1e-14 * (1.0 + std::abs(reference + offset));
    double step = alpha;
    bool accepted = false;
    double e_new = 0.0;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      for (std::size_t k = 0; k < m; ++k) x_new[k] = x[k] - step * g[k];
      e_new = problem.evaluate(x_new, g_new);
      if (std::isfinite(e_new) && e_new <= reference - kArmijo * step * gg + slack) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Safeguard failed: small fixed step, kept only if it does not raise
      // the energy.
      ++out.fallback_steps;
      step = std::min(initial_step, alpha) * 1e-3;
      for (std::size_t k = 0; k < m; ++k) x_new[k] = x[k] - step * g[k];
      e_new = problem.evaluate(x_new, g_new);
      if (!(std::isfinite(e_new) && e_new <= e + slack)) {
        if (++stalls >= kMaxStalls) break;
        alpha = initial_step;
        continue;
      }
    }
    stalls = accepted ? 0 : stalls;

    double sy = 0.0, ss = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double sk = x_new[k] - x[k];
      ss += sk * sk;
      sy += sk * (g_new[k] - g[k]);
    }
    alpha = (sy > 0.0 && std::isfinite(ss / sy)) ? ss / sy : std::min(2.0 * step, 1e3 * initial_step);
    alpha = std::clamp(alpha, 1e-30, 1e30);

    x.swap(x_new);
    g.swap(g_new);
    e = e_new;
    history.push_back(e);
    if (history.size() > kNonmonotoneMemory) history.pop_front();

    const double gnorm = sup_norm(g);
    if (e < best_e || (e == best_e && gnorm < best_gnorm)) {
      best_e = e;
      best_gnorm = gnorm;
      best_x = x;
    }
    if (is_converged(gnorm, e)) {
      out.x = std::move(x);
      out.energy_var = e;
      out.gradient_norm = gnorm;
      out.iterations = it;
      out.converged = true;
      return out;
    }
  }
  out.x = std::move(best_x);
  out.energy_var = best_e;
  out.gradient_norm = best_gnorm;
  out.iterations = it;
  out.converged = false;
  return out;
}

SolveResult solve_at(const BoundCoefficient& sigma, const GridFunction& f, const FracParams& params, double eps,
                     const std::vector<double>* start) {
  const PowerLaw law = params.law(eps);
  const ReducedProblem problem(sigma, f, params.s, law);
  const std::size_t m = problem.size();
  std::vector<double> x0(m, 0.0);
  std::vector<double> scratch;
  const double e_zero = problem.evaluate(x0, scratch);
  const double offset = pair_energy(exterior_part(f), sigma, law, params.s) - e_zero;
  if (start) x0 = *start;
  const DescentOutcome d = descend(problem, x0, offset, exterior_part(f).max_abs() + 1.0, params);

  SolveResult result;
  result.u = exterior_part(f);
  for (std::size_t k = 0; k < m; ++k) result.u[problem.free_nodes()[k]] = d.x[k];
  result.energy = energy(result.u, sigma, params);
  result.iterations = d.iterations;
  result.gradient_norm = d.gradient_norm;
  result.converged = d.converged;
  result.epsilon = eps;
  result.fallback_steps = d.fallback_steps;
  return result;
}

}  // namespace

void FracParams::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must satisfy 0 < s < 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p must exceed 1");
  if (epsilon_reg) {
    if (!(*epsilon_reg >= 0.0) || !std::isfinite(*epsilon_reg)) {
      throw ParameterError("epsilon_reg must be a finite nonnegative number");
    }
    if (p >= 2.0 && *epsilon_reg != 0.0) throw ParameterError("epsilon_reg must be 0 when p >= 2");
  }
  if (!(gradient_tol > 0.0)) throw ParameterError("gradient_tol must be positive");
  if (max_iterations < 0) throw ParameterError("max_iterations must be nonnegative");
}

double FracParams::resolved_epsilon(const GridFunction& f) const {
  if (p >= 2.0) return 0.0;
  if (epsilon_reg) return *epsilon_reg;
  return 1e-6 * (exterior_part(f).max_abs() + 1.0);
}

double energy(const GridFunction& v, const BoundCoefficient& sigma, const FracParams& params) {
  params.validate();
  check_domain(v, sigma);
  return pair_energy(v, sigma, params.law(0.0), params.s);
}

double energy(const GridFunction& v, const Coefficient& sigma, const FracParams& params) {
  return energy(v, sigma.bind(v.domain_ptr()), params);
}

double regularized_energy(const GridFunction& v, const BoundCoefficient& sigma, const FracParams& params,
                          double eps) {
  params.validate();
  check_domain(v, sigma);
  return pair_energy(v, sigma, params.law(eps), params.s);
}

GridFunction energy_gradient(const GridFunction& v, const BoundCoefficient& sigma, const FracParams& params,
                             double eps) {
  params.validate();
  check_domain(v, sigma);
  const GridDomain& d = v.domain();
  const PairKernel kernel = PairKernel::for_order(v.domain_ptr(), params.s, params.p);
  const PowerLaw law = params.law(eps);
  const std::vector<std::size_t>& omega = d.omega();
  GridFunction out(v.domain_ptr());
  parallel_blocks(omega.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      const std::size_t k = omega[a];
      double acc = 0.0;
      double zero_mass = 0.0;
      for (std::size_t j = 0; j < d.size(); ++j) {
        if (j == k) continue;
        const double c = sigma.symmetric(k, j) * kernel(k, j);
        if (v[j] == 0.0) {
          zero_mass += c;
        } else {
          acc += c * law.flux(v[k] - v[j]);
        }
      }
      out[k] = params.p * (acc + zero_mass * law.flux(v[k]));
    }
  });
  if (!out.all_finite()) throw NumericalError("energy gradient is not finite; use epsilon_reg > 0 for p < 2");
  return out;
}

SolveResult solve_dirichlet(const BoundCoefficient& sigma, const GridFunction& f, const FracParams& params,
                            const GridFunction* initial_guess) {
  params.validate();
  check_domain(f, sigma);
  if (!f.all_finite()) throw ParameterError("exterior data must be finite");
  const GridDomain& d = f.domain();
  std::vector<double> start;
  if (initial_guess) {
    if (initial_guess->domain_ptr() != f.domain_ptr()) throw ParameterError("initial guess lives on another domain");
    for (std::size_t i : d.omega()) start.push_back((*initial_guess)[i]);
  }
  const double eps = params.resolved_epsilon(f);
  SolveResult result = solve_at(sigma, f, params, eps, initial_guess ? &start : nullptr);
  if (params.p < 2.0 && params.epsilon_sensitivity && eps > 0.0) {
    std::vector<double> warm;
    for (std::size_t i : d.omega()) warm.push_back(result.u[i]);
    const SolveResult refined = solve_at(sigma, f, params, eps / 10.0, &warm);
    result.epsilon_sensitivity = sobolev_norm(result.u - refined.u, params.s, params.p);
  }
  return result;
}

double solution_estimate_constant(double lambda, double p) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ParameterError("lambda must lie in (0, 1]");
  if (!(p > 1.0)) throw ParameterError("p must exceed 1");
  const double q = p / (p - 1.0);
  auto young = [&](double e) { return std::pow(e * q, -(p - 1.0)) / p; };
  return std::pow(2.0 * young(lambda / 2.0) * std::pow(lambda, -p) / lambda, 1.0 / p);
}

SolutionEstimateReport check_solution_estimate(const SolveResult& result, const GridFunction& f,
                                               const FracParams& params, double lambda) {
  SolutionEstimateReport report;
  report.bound = solution_estimate_constant(lambda, params.p);
  const double su = gagliardo_seminorm(result.u, params.s, params.p);
  const double sf = gagliardo_seminorm(f, params.s, params.p);
  if (sf == 0.0) {
    // f constant: the computed u is constant up to the solver tolerance.
    const bool zero = su <= 1e-6 * (f.max_abs() + 1.0);
    report.degenerate = zero;
    report.ratio = zero ? 0.0 : std::numeric_limits<double>::infinity();
    report.within_bound = zero;
    return report;
  }
  report.ratio = su / sf;
  report.within_bound = report.ratio <= report.bound;
  return report;
}

}  // namespace fracdn
