#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "fracdn/errors.hpp"
#include "fracdn/grid.hpp"

using namespace fracdn;

namespace {

DomainPtr line_domain(double R = 4.0, double h = 0.5) {
  return build_domain(1, R, h, Region::box({0.0, 0.0}, 1.0), Region::box({2.5, 0.0}, 0.5));
}

}  // namespace

TEST_CASE("one-dimensional domain from the reference example") {
  const DomainPtr d = line_domain();
  CHECK(d->size() == 17);
  CHECK(d->nodes_per_axis() == 17);
  CHECK(d->omega_w_distance() == doctest::Approx(1.0));
  // Open sets: (-1,1) holds -0.5, 0, 0.5; (2,3) holds 2.5 only.
  REQUIRE(d->omega().size() == 3);
  REQUIRE(d->w_set().size() == 1);
  CHECK(d->point(d->w_set()[0])[0] == 2.5);
  CHECK(d->point(d->nearest_node({0.0, 0.0}))[0] == 0.0);
  CHECK(d->point(0)[0] == -4.0);
  CHECK(d->point(16)[0] == 4.0);
}

TEST_CASE("node count is odd and the origin is a node") {
  for (double h : {0.3, 0.25, 0.1, 0.07}) {
    const DomainPtr d = line_domain(4.0, h);
    const std::size_t k = d->nodes_per_axis();
    CHECK(k == 2 * static_cast<std::size_t>(std::floor(4.0 / h)) + 1);
    CHECK(d->axis_coordinate(k / 2) == 0.0);
  }
}

TEST_CASE("overlapping, touching or escaping regions are rejected") {
  CHECK_THROWS_AS(build_domain(1, 4.0, 0.5, Region::box({0, 0}, 1), Region::box({1.25, 0}, 0.75)), DomainError);
  CHECK_THROWS_AS(build_domain(1, 4.0, 0.5, Region::box({0, 0}, 1), Region::box({1.5, 0}, 0.5)), DomainError);
  CHECK_THROWS_AS(build_domain(1, 4.0, 0.5, Region::box({0, 0}, 1), Region::box({4.0, 0}, 0.5)), DomainError);
  CHECK_THROWS_AS(build_domain(3, 4.0, 0.5, Region::box({0, 0}, 1), Region::box({2.5, 0}, 0.5)), DomainError);
  CHECK_THROWS_AS(build_domain(1, 4.0, 0.0, Region::box({0, 0}, 1), Region::box({2.5, 0}, 0.5)), DomainError);
  // W too thin to contain a node.
  CHECK_THROWS_AS(build_domain(1, 4.0, 0.5, Region::box({0, 0}, 1), Region::box({2.25, 0}, 0.2)), DomainError);
}

TEST_CASE("two-dimensional membership matches brute-force enumeration") {
  const double R = 2.0, h = 0.25;
  const DomainPtr d = build_domain(2, R, h, Region::ball({0, 0}, 0.5), Region::box({1.25, 1.25}, 0.25));
  const std::size_t k = 2 * static_cast<std::size_t>(R / h) + 1;
  REQUIRE(d->size() == k * k);
  std::set<std::size_t> omega, w;
  for (std::size_t iy = 0; iy < k; ++iy) {
    for (std::size_t ix = 0; ix < k; ++ix) {
      const double x = -R + ix * h, y = -R + iy * h;
      if (x * x + y * y < 0.25) omega.insert(ix + k * iy);
      if (std::abs(x - 1.25) < 0.25 && std::abs(y - 1.25) < 0.25) w.insert(ix + k * iy);
    }
  }
  CHECK(std::set<std::size_t>(d->omega().begin(), d->omega().end()) == omega);
  CHECK(std::set<std::size_t>(d->w_set().begin(), d->w_set().end()) == w);
  CHECK(omega.size() == 9);
  CHECK(w.size() == 1);
  CHECK(d->omega_w_distance() == doctest::Approx(std::sqrt(2.0) - 0.5));
  for (std::size_t i : d->omega()) CHECK_FALSE(d->in_w(i));
}

TEST_CASE("rebuilding a spec gives identical node sets") {
  const DomainPtr a = build_domain(2, 3.0, 0.2, Region::ball({-0.3, 0.1}, 0.7), Region::ball({1.5, -1.0}, 0.4));
  const DomainPtr b = build_domain(2, 3.0, 0.2, Region::ball({-0.3, 0.1}, 0.7), Region::ball({1.5, -1.0}, 0.4));
  CHECK(a->omega() == b->omega());
  CHECK(a->w_set() == b->w_set());
}

TEST_CASE("default box half width is four times the diameter of the union") {
  CHECK(default_half_width(1, Region::box({0, 0}, 1), Region::box({2.5, 0}, 0.5)) == doctest::Approx(16.0));
}

TEST_CASE("zero extension") {
  const DomainPtr d = build_domain(1, 4.0, 0.25, Region::box({0, 0}, 1), Region::box({2.5, 0}, 0.5));
  REQUIRE(d->w_set().size() == 3);

  SUBCASE("ones on a three-node W") {
    const GridFunction f = zero_extension(d, std::vector<double>(3, 1.0));
    CHECK(f.support().size() == 3);
    CHECK(f.is_exterior_supported());
  }
  SUBCASE("zero data") {
    const GridFunction f = zero_extension(d, std::vector<double>(3, 0.0));
    CHECK(f.max_abs() == 0.0);
  }
  SUBCASE("random data restricts back and is linear") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::vector<double> a(3), b(3), comb(3);
    for (int k = 0; k < 3; ++k) {
      a[k] = g(rng);
      b[k] = g(rng);
      comb[k] = 2.0 * a[k] - 0.5 * b[k];
    }
    const GridFunction fa = zero_extension(d, a);
    const GridFunction fb = zero_extension(d, b);
    CHECK(restrict_to_w(fa) == a);
    for (std::size_t i : d->omega()) CHECK(fa[i] == 0.0);
    const GridFunction lhs = zero_extension(d, comb);
    const GridFunction rhs = 2.0 * fa - 0.5 * fb;
    for (std::size_t i = 0; i < d->size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-15));
  }
  SUBCASE("wrong length is rejected") {
    CHECK_THROWS_AS(zero_extension(d, std::vector<double>(2, 1.0)), DomainError);
  }
}

TEST_CASE("grid function tags") {
  const DomainPtr d = line_domain(4.0, 0.25);
  GridFunction u(d);
  CHECK(u.is_test_space());
  CHECK(u.is_exterior_supported());
  u[d->omega()[0]] = 1.0;
  CHECK(u.is_test_space());
  CHECK_FALSE(u.is_exterior_supported());
  u[d->w_set()[0]] = 1.0;
  CHECK_FALSE(u.is_test_space());
  CHECK(exterior_part(u).is_exterior_supported());
  CHECK(u.all_finite());
  u[0] = std::nan("");
  CHECK_FALSE(u.all_finite());
}
