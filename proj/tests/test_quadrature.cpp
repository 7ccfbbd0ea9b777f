#include <doctest.h>

#include <cmath>
#include <random>

#include "fracdn/errors.hpp"
#include "fracdn/parallel.hpp"
#include "fracdn/quadrature.hpp"
#include "fracdn/testfn.hpp"

using namespace fracdn;

namespace {

DomainPtr line(double h, double R = 4.0) {
  return build_domain(1, R, h, Region::box({0, 0}, 1), Region::box({2.5, 0}, 0.5));
}

GridFunction random_function(const DomainPtr& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction f(d);
  for (std::size_t i = 0; i < d->size(); ++i) f[i] = u(rng);
  return f;
}

// Every ordered pair, straight from the definition.
double dense_seminorm_pow(const GridFunction& u, double t, double p) {
  const GridDomain& d = u.domain();
  const double h2n = std::pow(d.spacing(), 2 * d.dim());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (i == j) continue;
      const Point a = d.point(i), b = d.point(j);
      const double r = std::hypot(a[0] - b[0], a[1] - b[1]);
      acc += std::pow(std::abs(u[i] - u[j]), p) / std::pow(r, d.dim() + t * p) * h2n;
    }
  }
  return acc;
}

GridFunction bump_at(const DomainPtr& d, Point c, double r) {
  GridFunction f(d);
  for (std::size_t i = 0; i < d->size(); ++i) {
    const Point x = d->point(i);
    double v = 1.0;
    for (int k = 0; k < d->dim(); ++k) {
      const double t = (x[k] - c[k]) / r;
      v *= std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
    }
    f[i] = v;
  }
  return f;
}

}  // namespace

TEST_CASE("pair kernel matches the direct weight and is symmetric") {
  for (int dim : {1, 2}) {
    const DomainPtr d = dim == 1 ? line(0.125)
                                 : build_domain(2, 2.0, 0.25, Region::ball({0, 0}, 0.5), Region::box({1.25, 1.25}, 0.25));
    const double t = 0.3, p = 2.5;
    const PairKernel k = PairKernel::for_order(d, t, p);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, d->size() - 1);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t i = pick(rng), j = pick(rng);
      CHECK(k(i, j) == k(j, i));
      CHECK(k(i, j) >= 0.0);
      CHECK(std::isfinite(k(i, j)));
      if (i == j) {
        CHECK(k(i, j) == 0.0);
        continue;
      }
      const Point a = d->point(i), b = d->point(j);
      const double expected = std::pow(d->spacing(), 2 * dim) / std::pow(std::hypot(a[0] - b[0], a[1] - b[1]), dim + t * p);
      CHECK(k(i, j) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("s-gradient") {
  const DomainPtr d = build_domain(1, 4.0, 1.0, Region::box({-2, 0}, 1.5), Region::box({2, 0}, 0.5));
  GridFunction x(d);
  for (std::size_t i = 0; i < d->size(); ++i) x[i] = d->point(i)[0];
  const PairField g = s_gradient(x, 0.5);
  const std::size_t one = d->nearest_node({1, 0}), zero = d->nearest_node({0, 0});
  CHECK(g(one, zero) == doctest::Approx(1.0));

  SUBCASE("constants have zero s-gradient") {
    GridFunction c(d, std::vector<double>(d->size(), 3.7));
    const PairField gc = s_gradient(c, 0.4);
    for (std::size_t i = 0; i < d->size(); ++i)
      for (std::size_t j = 0; j < d->size(); ++j) CHECK(gc(i, j) == 0.0);
  }
  SUBCASE("antisymmetry and the product rule") {
    const DomainPtr dd = line(0.25);
    const GridFunction phi = random_function(dd, 1), psi = random_function(dd, 2);
    GridFunction prod(dd);
    for (std::size_t i = 0; i < dd->size(); ++i) prod[i] = phi[i] * psi[i];
    const double s = 0.35;
    const PairField a = s_gradient(phi, s), b = s_gradient(psi, s), ab = s_gradient(prod, s);
    for (std::size_t i = 0; i < dd->size(); ++i) {
      for (std::size_t j = 0; j < dd->size(); ++j) {
        CHECK(a(i, j) == -a(j, i));
        CHECK(ab(i, j) == doctest::Approx(phi[i] * b(i, j) + psi[j] * a(i, j)).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("seminorm agrees with the dense double sum") {
  const DomainPtr d = line(0.125);
  GridFunction u = random_function(d, 11);
  for (std::size_t i = 0; i < d->size(); ++i)
    if (i % 3 == 0) u[i] = 0.0;  // exercise the zero/nonzero split
  for (double p : {1.5, 2.0, 3.0}) {
    for (double t : {0.2, 0.5, 0.8}) {
      CHECK(gagliardo_seminorm_pow(u, t, p) == doctest::Approx(dense_seminorm_pow(u, t, p)).epsilon(1e-12));
    }
  }
  const DomainPtr d2 = build_domain(2, 1.5, 0.25, Region::ball({0, 0}, 0.5), Region::box({1.0, 1.0}, 0.3));
  const GridFunction v = bump_at(d2, {0.75, 0.5}, 0.6);
  CHECK(gagliardo_seminorm_pow(v, 0.4, 2.5) == doctest::Approx(dense_seminorm_pow(v, 0.4, 2.5)).epsilon(1e-12));
}

TEST_CASE("seminorm invariants") {
  const DomainPtr d = line(0.0625);
  const GridFunction u = random_function(d, 5);
  const double s = 0.5, p = 2.5;
  const double base = gagliardo_seminorm(u, s, p);

  CHECK(gagliardo_seminorm(GridFunction(d, std::vector<double>(d->size(), 2.0)), s, p) == 0.0);
  GridFunction shifted = u;
  for (std::size_t i = 0; i < d->size(); ++i) shifted[i] += 0.75;
  CHECK(gagliardo_seminorm(shifted, s, p) == doctest::Approx(base).epsilon(1e-10));
  CHECK(gagliardo_seminorm(-3.0 * u, s, p) == doctest::Approx(3.0 * base).epsilon(1e-12));
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < d->size(); i += 2) subset.push_back(i);
  CHECK(gagliardo_seminorm_on(u, s, p, subset) <= base);
  std::vector<std::size_t> all(d->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(gagliardo_seminorm_on(u, s, p, all) == doctest::Approx(base).epsilon(1e-12));
  CHECK_THROWS_AS(gagliardo_seminorm(u, 1.0, p), ParameterError);
  CHECK_THROWS_WITH_AS(gagliardo_seminorm(u, s, 1.0), "p must exceed 1", ParameterError);
}

TEST_CASE("seminorm of a smooth bump matches a four times finer grid within 5%") {
  const double s = 0.5, p = 2.0;
  const GridFunction coarse = bump_at(line(1.0 / 32, 8.0), {2.5, 0}, 0.5);
  const GridFunction fine = bump_at(line(1.0 / 128, 8.0), {2.5, 0}, 0.5);
  const double a = gagliardo_seminorm(coarse, s, p), b = gagliardo_seminorm(fine, s, p);
  CHECK(std::abs(a - b) / b < 0.05);
}

TEST_CASE("Sobolev norm") {
  const DomainPtr d = line(0.125);
  CHECK(sobolev_norm(GridFunction(d), 0.5, 2.0) == 0.0);
  for (std::uint64_t seed : {1, 2, 3}) {
    const GridFunction u = random_function(d, seed);
    const double n = sobolev_norm(u, 0.4, 3.0);
    CHECK(n >= gagliardo_seminorm(u, 0.4, 3.0));
    CHECK(n >= lp_norm(u, 3.0));
    CHECK(sobolev_norm(u, 0.0, 3.0) == doctest::Approx(lp_norm(u, 3.0)));
  }
}

TEST_CASE("Poincare ratio") {
  const double s = 0.5, p = 2.0;

  SUBCASE("rejects zero and non-test-space input") {
    const DomainPtr d = line(0.125);
    CHECK_THROWS_AS(poincare_ratio(GridFunction(d), s, p), ParameterError);
    GridFunction outside(d);
    outside[d->w_set()[0]] = 1.0;
    CHECK_THROWS_AS(poincare_ratio(outside, s, p), ParameterError);
  }
  SUBCASE("a single interior hat gives a finite positive ratio") {
    const DomainPtr d = line(0.125);
    GridFunction hat(d);
    hat[d->nearest_node({0, 0})] = 1.0;
    const double r = poincare_ratio(hat, s, p);
    CHECK(r > 0.0);
    CHECK(std::isfinite(r));
  }
  SUBCASE("exact 2^{-sp} scaling on a uniformly rescaled grid") {
    const DomainPtr big = build_domain(1, 8.0, 1.0 / 32, Region::box({0, 0}, 1.0), Region::box({2.5, 0}, 0.5));
    const DomainPtr small = build_domain(1, 4.0, 1.0 / 64, Region::box({0, 0}, 0.5), Region::box({1.25, 0}, 0.25));
    const double rb = poincare_ratio(bump_at(big, {0, 0}, 0.9), s, p);
    const double rs = poincare_ratio(bump_at(small, {0, 0}, 0.45), s, p);
    CHECK(rs / rb == doctest::Approx(std::pow(2.0, -s * p)).epsilon(1e-10));
  }
  SUBCASE("ratio / diam^{sp} stays bounded over a family of domains") {
    // Fixed spacing: the domains are not exact rescalings of each other.
    double lo = 1e300, hi = 0.0;
    for (double a : {0.25, 0.5, 1.0, 2.0}) {
      const DomainPtr d =
          build_domain(1, 16.0, 1.0 / 64, Region::box({0, 0}, a), Region::box({a + 1.0, 0}, 0.5));
      const double r = poincare_ratio(bump_at(d, {0, 0}, 0.9 * a), s, p) / std::pow(2.0 * a, s * p);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo < 1.2);
  }
}

TEST_CASE("pointwise fractional p-Laplacian") {
  const DomainPtr d = line(0.125);
  const std::size_t x0 = d->nearest_node({0, 0});
  CHECK(pointwise_p_laplacian(GridFunction(d, std::vector<double>(d->size(), 1.5)), 0.5, 3.0, x0) == 0.0);
  GridFunction odd(d);
  for (std::size_t i = 0; i < d->size(); ++i) odd[i] = std::sin(d->point(i)[0]);
  CHECK(std::abs(pointwise_p_laplacian(odd, 0.5, 2.0, x0)) < 1e-12);
  CHECK(std::abs(pointwise_p_laplacian(odd, 0.5, 3.0, x0)) < 1e-12);
  const double a = pointwise_p_laplacian(bump_at(d, {0, 0}, 0.5), 0.5, 2.0, x0);
  CHECK(a > 0.0);
  CHECK(pointwise_p_laplacian(bump_at(d, {0, 0}, 0.5), 0.5, 2.0, x0, 2.0) == doctest::Approx(2.0 * a));
}

TEST_CASE("pair sums are bit-identical across thread counts") {
  const DomainPtr d = line(1.0 / 64, 8.0);
  const GridFunction u = random_function(d, 9);
  const std::size_t saved = thread_count();
  set_thread_count(1);
  const double one = gagliardo_seminorm_pow(u, 0.5, 2.5);
  set_thread_count(3);
  const double three = gagliardo_seminorm_pow(u, 0.5, 2.5);
  set_thread_count(saved);
  CHECK(one == three);
}
