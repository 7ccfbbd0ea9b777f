#include "fracdn/quadrature.hpp"

#include <algorithm>

#include "fracdn/errors.hpp"
#include "fracdn/parallel.hpp"

namespace fracdn {

namespace {

void check_order(double t, double p) {
  if (!(t > 0.0 && t < 1.0)) throw ParameterError("smoothness order must satisfy 0 < t < 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p must exceed 1");
}

}  // namespace

PairKernel::PairKernel(DomainPtr domain, double exponent)
    : domain_(std::move(domain)),
      dim_(domain_->dim()),
      per_axis_(domain_->nodes_per_axis()),
      exponent_(exponent) {
  const double h = domain_->spacing();
  const double h2n = domain_->cell_volume() * domain_->cell_volume();
  const std::size_t k = per_axis_;
  table_.assign(dim_ == 1 ? k : k * k, 0.0);
  for (std::size_t dy = 0; dy < (dim_ == 1 ? 1 : k); ++dy) {
    for (std::size_t dx = 0; dx < k; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const double r = h * std::hypot(static_cast<double>(dx), static_cast<double>(dy));
      table_[dx + k * dy] = h2n / std::pow(r, exponent_);
    }
  }
}

PairField s_gradient(const GridFunction& u, double s) {
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("s must satisfy 0 < s < 1");
  const GridDomain& d = u.domain();
  const std::size_t m = d.size();
  std::vector<double> out(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Point xi = d.point(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const Point xj = d.point(j);
      const double r = std::hypot(xi[0] - xj[0], xi[1] - xj[1]);
      out[i * m + j] = (u[i] - u[j]) / std::pow(r, s);
    }
  }
  return PairField(m, std::move(out));
}

double lp_norm(const GridFunction& u, double p) {
  double acc = 0.0;
  for (double v : u.values()) acc += std::pow(std::abs(v), p);
  return std::pow(u.domain().cell_volume() * acc, 1.0 / p);
}

double gagliardo_seminorm_pow(const GridFunction& u, double t, double p) {
  check_order(t, p);
  const PairKernel kernel = PairKernel::for_order(u.domain_ptr(), t, p);
  const PowerLaw law{p, 0.0};
  const std::vector<std::size_t> active = u.support();
  std::vector<unsigned char> mask(u.size(), 0);
  for (std::size_t i : active) mask[i] = 1;
  const std::size_t m = u.size();
  // Pairs with both values zero vanish; pairs leaving the support collapse to
  // |u_i|^p times the kernel mass outside it (counted for both orderings).
  return deterministic_sum(active.size(), [&](std::size_t a) {
    const std::size_t i = active[a];
    double inside = 0.0;
    double outside = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      if (mask[j]) {
        inside += law.value(u[i] - u[j]) * kernel(i, j);
      } else {
        outside += kernel(i, j);
      }
    }
    return inside + 2.0 * law.value(u[i]) * outside;
  });
}

double gagliardo_seminorm(const GridFunction& u, double t, double p) {
  return std::pow(gagliardo_seminorm_pow(u, t, p), 1.0 / p);
}

double gagliardo_seminorm_on(const GridFunction& u, double t, double p, std::span<const std::size_t> nodes) {
  check_order(t, p);
  const PairKernel kernel = PairKernel::for_order(u.domain_ptr(), t, p);
  const PowerLaw law{p, 0.0};
  const double total = deterministic_sum(nodes.size(), [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      if (a != b) acc += law.value(u[nodes[a]] - u[nodes[b]]) * kernel(nodes[a], nodes[b]);
    }
    return acc;
  });
  return std::pow(total, 1.0 / p);
}

double sobolev_norm(const GridFunction& u, double t, double p) {
  const double lp = std::pow(lp_norm(u, p), p);
  if (t == 0.0) return std::pow(lp, 1.0 / p);
  return std::pow(lp + gagliardo_seminorm_pow(u, t, p), 1.0 / p);
}

double poincare_ratio(const GridFunction& u, double s, double p) {
  if (!u.is_test_space()) throw ParameterError("Poincare ratio needs a function vanishing outside Omega");
  const double semi = gagliardo_seminorm_pow(u, s, p);
  if (!(semi > 0.0)) throw ParameterError("Poincare ratio is undefined for u = 0");
  return std::pow(lp_norm(u, p), p) / semi;
}

double pointwise_p_laplacian(const GridFunction& u, double s, double p, std::size_t node, double normalization) {
  check_order(s, p);
  const PairKernel kernel = PairKernel::for_order(u.domain_ptr(), s, p);
  const PowerLaw law{p, 0.0};
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (j != node) acc += law.flux(u[node] - u[j]) * kernel(node, j);
  }
  return normalization * acc / u.domain().cell_volume();
}

}  // namespace fracdn
