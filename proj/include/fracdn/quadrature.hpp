#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fracdn/grid.hpp"

namespace fracdn {

/// Midpoint pair weights h^{2n} / |x_i - x_j|^{exponent}; zero on the
/// diagonal. On a uniform grid the weight depends only on the index offset,
/// so one value per offset is stored (O(M) memory for M nodes).
class PairKernel {
 public:
  PairKernel(DomainPtr domain, double exponent);
  /// Kernel of the W^{t,p} seminorm: exponent n + t p.
  static PairKernel for_order(const DomainPtr& domain, double t, double p) {
    return PairKernel(domain, domain->dim() + t * p);
  }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (dim_ == 1) return table_[i > j ? i - j : j - i];
    const std::size_t ix = i % per_axis_, iy = i / per_axis_;
    const std::size_t jx = j % per_axis_, jy = j / per_axis_;
    return table_[(ix > jx ? ix - jx : jx - ix) + per_axis_ * (iy > jy ? iy - jy : jy - iy)];
  }
  double exponent() const noexcept { return exponent_; }
  const GridDomain& domain() const noexcept { return *domain_; }

 private:
  DomainPtr domain_;
  int dim_;
  std::size_t per_axis_;
  double exponent_;
  std::vector<double> table_;
};

/// t -> |t|^p and its flux t -> |t|^{p-2} t, optionally regularized as
/// (t^2 + eps^2)^{p/2} - eps^p with flux (t^2 + eps^2)^{(p-2)/2} t.
struct PowerLaw {
  double p = 2.0;
  double eps = 0.0;

  double value(double t) const noexcept {
    if (p == 2.0) return t * t;
    if (eps == 0.0) return std::pow(std::abs(t), p);
    return std::pow(t * t + eps * eps, 0.5 * p) - std::pow(eps, p);
  }
  double flux(double t) const noexcept {
    if (p == 2.0) return t;
    if (eps == 0.0) {
      if (p == 3.0) return std::abs(t) * t;
      if (t == 0.0) return 0.0;
      return std::pow(std::abs(t), p - 2.0) * t;
    }
    return std::pow(t * t + eps * eps, 0.5 * (p - 2.0)) * t;
  }
};

/// d_s u on every ordered node pair, stored densely.
class PairField {
 public:
  PairField(std::size_t size, std::vector<double> values) : size_(size), values_(std::move(values)) {}
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * size_ + j]; }
  std::size_t size() const noexcept { return size_; }

 private:
  std::size_t size_;
  std::vector<double> values_;
};

/// d_s u(x_i, x_j) = (u_i - u_j) / |x_i - x_j|^s for i != j, 0 on the diagonal.
PairField s_gradient(const GridFunction& u, double s);

/// ||u||_{L^p} = (h^n sum |u_i|^p)^{1/p}
double lp_norm(const GridFunction& u, double p);

/// [u]^p_{W^{t,p}}: the double node sum of |u_i - u_j|^p / |x_i - x_j|^{n+tp}
/// times h^{2n}, diagonal excluded. Only pairs touching supp(u) are visited.
double gagliardo_seminorm_pow(const GridFunction& u, double t, double p);
double gagliardo_seminorm(const GridFunction& u, double t, double p);
/// Seminorm with both pair members restricted to `nodes`.
double gagliardo_seminorm_on(const GridFunction& u, double t, double p, std::span<const std::size_t> nodes);

/// (||u||^p_{L^p} + [u]^p_{W^{t,p}})^{1/p}; t = 0 gives the L^p norm.
double sobolev_norm(const GridFunction& u, double t, double p);

/// ||u||^p_{L^p} / [u]^p_{W^{s,p}} for a nonzero test-space function.
double poincare_ratio(const GridFunction& u, double s, double p);

/// C * sum_{j != i} |u_i - u_j|^{p-2} (u_i - u_j) / |x_i - x_j|^{n+sp} h^n.
double pointwise_p_laplacian(const GridFunction& u, double s, double p, std::size_t node,
                             double normalization = 1.0);

}  // namespace fracdn
