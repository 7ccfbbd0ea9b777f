#include <doctest.h>

#include <cmath>
#include <string>

#include "fracdn/errors.hpp"
#include "fracdn/quadrature.hpp"
#include "fracdn/testfn.hpp"

using namespace fracdn;

namespace {

DomainPtr line(double h, double R = 16.0) {
  return build_domain(1, R, h, Region::box({0, 0}, 1), Region::box({2.5, 0}, 0.5));
}

// Smallest and largest coordinate of the nonzero nodes.
std::pair<double, double> support_extent(const GridFunction& f) {
  const auto s = f.support();
  return {f.domain().point(s.front())[0], f.domain().point(s.back())[0]};
}

}  // namespace

TEST_CASE("profiles vanish outside (-1, 1) and are nonzero inside") {
  for (const BumpProfile& psi : {BumpProfile::standard(), BumpProfile::flat_top()}) {
    CHECK(psi(1.0) == 0.0);
    CHECK(psi(-1.0) == 0.0);
    CHECK(psi(1.5) == 0.0);
    CHECK(psi(0.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(psi(0.999) > 0.0);
    CHECK(BumpProfile::from_name(psi.name()).kind() == psi.kind());
  }
  CHECK_THROWS_AS(BumpProfile::from_name("gaussian"), ParameterError);
}

TEST_CASE("N = 1 bump is supported in W with its maximum at x0") {
  const DomainPtr d = line(1.0 / 64);
  const GridFunction psi = tensor_bump(BumpProfile::standard(), {2.5, 0}, 0.5, 1, d);
  const auto [lo, hi] = support_extent(psi);
  CHECK(lo > 2.0);
  CHECK(hi < 3.0);
  CHECK(psi.is_exterior_supported());
  std::size_t arg = 0;
  for (std::size_t i = 0; i < d->size(); ++i)
    if (psi[i] > psi[arg]) arg = i;
  CHECK(d->point(arg)[0] == 2.5);
}

TEST_CASE("doubling N halves the support diameter") {
  const DomainPtr d = line(1.0 / 256);
  double previous = 0.0;
  for (int n : {1, 2, 4, 8}) {
    const auto [lo, hi] = support_extent(tensor_bump(BumpProfile::standard(), {2.5, 0}, 0.5, n, d));
    const double diameter = hi - lo + 2.0 * d->spacing();  // outermost zero nodes bound the support
    CHECK(diameter == doctest::Approx(1.0 / n));
    if (previous > 0.0) CHECK(diameter == doctest::Approx(previous / 2.0));
    previous = diameter;
  }
}

TEST_CASE("resolution guard names the spacing it needs") {
  const DomainPtr d = line(1.0 / 16);
  CHECK_NOTHROW(tensor_bump(BumpProfile::standard(), {2.5, 0}, 0.5, 1, d));
  try {
    tensor_bump(BumpProfile::standard(), {2.5, 0}, 0.5, 4, d);
    FAIL("expected a resolution error");
  } catch (const ResolutionError& e) {
    CHECK(e.required_h() == doctest::Approx(2.0 * 0.125 / 9.0));
    CHECK(std::string(e.what()).find("h <=") != std::string::npos);
    CHECK(std::string(e.what()).find("Psi_4") != std::string::npos);
  }
  CHECK_THROWS_AS(tensor_bump(BumpProfile::standard(), {2.7, 0}, 0.5, 1, d), ParameterError);
}

TEST_CASE("normalized bumps have unit seminorm") {
  const DomainPtr d = line(1.0 / 128);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int n : {1, 2, 4, 8}) {
      const GridFunction phi = normalize_phi(tensor_bump(BumpProfile::standard(), {2.5, 0}, 0.5, n, d), 0.5, p);
      CHECK(std::abs(gagliardo_seminorm(phi, 0.5, p) - 1.0) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(normalize_phi(GridFunction(d), 0.5, 2.0), ParameterError);
}

TEST_CASE("sequence properties") {
  const DomainPtr d = line(1.0 / 256);
  TestSequenceConfig cfg;
  cfg.x0 = {2.5, 0};
  cfg.s = 0.5;
  cfg.p = 2.0;
  cfg.n_list = {1, 2, 4};
  const auto seq = make_sequence(cfg, d, BumpProfile::standard());
  REQUIRE(seq.size() == 3);

  const GridFunction psi = tensor_bump(BumpProfile::standard(), cfg.x0, cfg.r0, 1, d);
  const double lp_over_semi = lp_norm(psi, cfg.p) / gagliardo_seminorm(psi, cfg.s, cfg.p);
  double prev_lp = 1e300, prev_half = 1e300, first_scaled = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const int n = cfg.n_list[k];
    const GridFunction& phi = seq[k];
    CHECK(std::abs(gagliardo_seminorm(phi, cfg.s, cfg.p) - 1.0) <= 1e-12);
    CHECK(phi.is_exterior_supported());
    const auto [lo, hi] = support_extent(phi);
    CHECK(lo > 2.5 - cfg.r0 / n);
    CHECK(hi < 2.5 + cfg.r0 / n);
    if (k > 0) {
      for (std::size_t i : phi.support()) CHECK(seq[k - 1][i] != 0.0);
    }
    // t in {0, s/2}: the W^{t,p} norms decrease along the list.
    const double lp = sobolev_norm(phi, 0.0, cfg.p);
    const double half = sobolev_norm(phi, cfg.s / 2, cfg.p);
    CHECK(lp < prev_lp);
    CHECK(half < prev_half);
    prev_lp = lp;
    prev_half = half;
    // ||Phi_N||_{L^p} ~ N^{-s} ||Psi||_{L^p} / [Psi]_{W^{s,p}}
    CHECK(lp == doctest::Approx(std::pow(n, -cfg.s) * lp_over_semi).epsilon(0.05));
    const double scaled = std::pow(n, cfg.s) * lp;
    if (k == 0) first_scaled = scaled;
    CHECK(std::abs(scaled / first_scaled - 1.0) < 0.15);
  }
  cfg.n_list = {1, 4, 2};
  CHECK_THROWS_AS(make_sequence(cfg, d, BumpProfile::standard()), ParameterError);
}

TEST_CASE("[Phi_N]_{W^{t,p}} follows N^{t-s} for t < s") {
  const DomainPtr d = line(1.0 / 256);
  const double s = 0.5, p = 2.0, t = 0.25;
  const GridFunction psi = tensor_bump(BumpProfile::standard(), {2.5, 0}, 0.5, 1, d);
  const double base = gagliardo_seminorm(psi, t, p) / gagliardo_seminorm(psi, s, p);
  for (int n : {2, 4}) {
    const GridFunction phi = normalize_phi(tensor_bump(BumpProfile::standard(), {2.5, 0}, 0.5, n, d), s, p);
    CHECK(gagliardo_seminorm(phi, t, p) == doctest::Approx(std::pow(n, t - s) * base).epsilon(0.05));
  }
}

TEST_CASE("two-dimensional tensor bump") {
  const DomainPtr d = build_domain(2, 3.0, 1.0 / 32, Region::ball({0, 0}, 0.5), Region::box({1.5, 1.5}, 0.5));
  const GridFunction psi = tensor_bump(BumpProfile::flat_top(), {1.5, 1.5}, 0.4, 2, d);
  for (std::size_t i : psi.support()) {
    const Point x = d->point(i);
    CHECK(std::abs(x[0] - 1.5) < 0.2);
    CHECK(std::abs(x[1] - 1.5) < 0.2);
    CHECK(d->in_w(i));
  }
  const std::size_t c = d->nearest_node({1.5, 1.5});
  CHECK(psi[c] == doctest::Approx(std::exp(-2.0)));
}
