#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracdn/errors.hpp"
#include "fracdn/recon.hpp"

using namespace fracdn;

namespace {

// Omega = (-1, 1), W = (2, 3), x0 = 2.5 with r0 = 0.5.
DomainPtr line(double h = 1.0 / 64) {
  return build_domain(1, 4.0, h, Region::box({0, 0}, 1.0), Region::box({2.5, 0}, 0.5));
}

TestSequenceConfig sequence(std::vector<int> n_list = {1, 2, 4}) {
  TestSequenceConfig seq;
  seq.x0 = {2.5, 0.0};
  seq.n_list = std::move(n_list);
  return seq;
}

FracParams params_for(double p) {
  FracParams fp;
  fp.p = p;
  fp.gradient_tol = 1e-12;
  return fp;
}

Coefficient gamma_sigma(double amplitude) {
  return Coefficient::separable(ScalarField::gaussian(1.0, amplitude, {2.5, 0.0}, 1.0));
}

}  // namespace

TEST_CASE("extrapolation of synthetic sequences") {
  const std::vector<int> n{1, 2, 4, 8};

  SUBCASE("power law tail is recovered exactly") {
    std::vector<double> a;
    for (int k : n) a.push_back(3.0 + 2.0 * std::pow(k, -1.5));
    const Extrapolation e = extrapolate_limit(n, a);
    CHECK_FALSE(e.fallback);
    CHECK(e.limit == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(e.rate == doctest::Approx(1.5).epsilon(1e-8));
  }
  SUBCASE("decreasing from below") {
    std::vector<double> a;
    for (int k : n) a.push_back(-1.0 - 0.5 / (k * k));
    const Extrapolation e = extrapolate_limit(n, a);
    CHECK(e.limit == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(e.rate == doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("non-monotone tail falls back to the last row") {
    const std::vector<double> a{1.0, 1.2, 1.1, 1.15};
    const Extrapolation e = extrapolate_limit(n, a);
    CHECK(e.fallback);
    CHECK(e.limit == 1.15);
    CHECK_FALSE(e.note.empty());
  }
  SUBCASE("non-contracting tail falls back") {
    const std::vector<double> a{1.0, 1.1, 1.2, 1.4};
    CHECK(extrapolate_limit(n, a).fallback);
  }
  SUBCASE("flat tail is taken as is") {
    const std::vector<double> a{3.0, 3.0, 3.0, 3.0};
    const Extrapolation e = extrapolate_limit(n, a);
    CHECK_FALSE(e.fallback);
    CHECK(e.limit == 3.0);
  }
  SUBCASE("fewer than three rows") {
    const std::vector<int> m{1, 2};
    const std::vector<double> a{2.0, 2.5};
    const Extrapolation e = extrapolate_limit(m, a);
    CHECK(e.fallback);
    CHECK(e.limit == 2.5);
  }
}

TEST_CASE("constant coefficient is reproduced exactly") {
  const DomainPtr d = line();
  for (double p : {1.5, 2.0, 3.0}) {
    const ExperimentRecord r =
        reconstruct_diagonal(Coefficient::constant(3.0), d, BumpProfile::standard(), sequence(), params_for(p));
    CAPTURE(p);
    REQUIRE_FALSE(r.failed);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.target == 3.0);
    for (const ExperimentRow& row : r.rows) {
      CHECK(std::abs(row.energy - 3.0) <= 3e-12);
      CHECK(std::isfinite(row.pairing));
      CHECK(row.converged);
    }
    CHECK(r.energy_limit.limit == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.error == doctest::Approx(std::abs(r.pairing_limit.limit - 3.0)));
    CHECK_FALSE(r.inconsistent);
    CHECK(r.s == 0.5);
    CHECK(r.p == p);
    CHECK(r.h == d->spacing());
  }
}

TEST_CASE("separable coefficient: limit is gamma(x0)") {
  const DomainPtr d = line();
  const Coefficient sigma = gamma_sigma(0.5);
  const ExperimentRecord r = reconstruct_diagonal(sigma, d, BumpProfile::standard(), sequence(), params_for(2.0));
  REQUIRE_FALSE(r.failed);
  CHECK(r.target == doctest::Approx(1.5));
  CHECK(r.error <= 0.05 * r.target);
  CHECK(std::abs(r.energy_limit.limit - r.target) <= 0.05 * r.target);
}

TEST_CASE("row invariants: consistency, ordering and decay") {
  const DomainPtr d = line(1.0 / 128);
  const Coefficient sigma = Coefficient::sinusoidal(2.0, 1.0);
  const ExperimentRecord r =
      reconstruct_diagonal(sigma, d, BumpProfile::standard(), sequence({1, 2, 4, 8}), params_for(3.0));
  REQUIRE_FALSE(r.failed);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.target == doctest::Approx(2.0 + std::sin(2.5) * std::sin(2.5)));
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const ExperimentRow& row = r.rows[k];
    CHECK(std::abs((row.pairing - row.energy) - row.correction) <= 1e-10 * std::abs(row.pairing));
    if (k > 0) CHECK(row.n > r.rows[k - 1].n);
  }
  for (std::size_t k = r.rows.size() / 2; k < r.rows.size(); ++k) {
    CHECK(std::abs(r.rows[k].correction) <= std::abs(r.rows[k - 1].correction));
    CHECK(r.rows[k].u_minus_phi_norm <= r.rows[k - 1].u_minus_phi_norm);
  }
  CHECK(r.error <= 0.05 * r.target);
}

TEST_CASE("profile independence") {
  const DomainPtr d = line(1.0 / 128);
  const Coefficient sigma = gamma_sigma(0.5);
  const ExperimentRecord a =
      reconstruct_diagonal(sigma, d, BumpProfile::standard(), sequence({1, 2, 4, 8}), params_for(2.0));
  const ExperimentRecord b =
      reconstruct_diagonal(sigma, d, BumpProfile::flat_top(), sequence({1, 2, 4, 8}), params_for(2.0));
  CHECK(b.profile != a.profile);
  CHECK(std::abs(a.pairing_limit.limit - b.pairing_limit.limit) <= a.error + b.error + 1e-3);
}

TEST_CASE("unresolved N leaves a partial record") {
  const DomainPtr d = line(1.0 / 64);
  const ExperimentRecord r = reconstruct_diagonal(Coefficient::constant(2.0), d, BumpProfile::standard(),
                                                  sequence({1, 2, 4, 8}), params_for(2.0));
  CHECK(r.failed);
  CHECK(r.rows.size() == 3);
  CHECK(r.failure.find("N=8") != std::string::npos);
}

TEST_CASE("exterior determination") {
  const DomainPtr d = line();
  const std::vector<Point> points{{2.5, 0.0}};

  SUBCASE("identical coefficients") {
    const Coefficient sigma = gamma_sigma(0.5);
    const DeterminationReport rep =
        exterior_determination(sigma, sigma, points, d, BumpProfile::standard(), sequence(), params_for(2.0));
    REQUIRE(rep.probes.size() == 1);
    CHECK(rep.probes[0].limit_discrepancy <= 1e-10);
    CHECK(rep.probes[0].pairings_agree);
    CHECK(rep.probes[0].consistent);
  }
  SUBCASE("coefficients differing away from the diagonal of W") {
    // The bump factor pair lives on Omega x W, so the diagonal over W is
    // untouched.
    const Coefficient sigma1 = gamma_sigma(0.5).shifted(1.0);
    const Coefficient sigma2 =
        gamma_sigma(0.5) + Coefficient::rank_one(Factor::of(ScalarField::bump(0.0, 0.5, {0.0, 0.0}, 0.5)),
                                                 Factor::of(ScalarField::bump(0.0, 1.0, {2.5, 0.0}, 0.5)), 1.0);
    CHECK(sigma2.evaluate({0.0, 0.0}, {2.5, 0.0}) != sigma1.evaluate({0.0, 0.0}, {2.5, 0.0}));
    const DeterminationReport rep =
        exterior_determination(sigma1, sigma2, points, d, BumpProfile::standard(), sequence(), params_for(2.0));
    const DeterminationProbe& probe = rep.probes[0];
    CHECK(probe.diagonal_discrepancy == 0.0);
    CHECK_FALSE(probe.pairings_agree);
    CHECK(probe.limit_discrepancy <= probe.first.error + probe.second.error + 1e-3);
  }
  SUBCASE("coefficients differing on the diagonal") {
    const Coefficient sigma1 = gamma_sigma(0.5);
    const Coefficient sigma2 = sigma1.shifted(0.3);
    const DeterminationReport rep =
        exterior_determination(sigma1, sigma2, points, d, BumpProfile::standard(), sequence(), params_for(2.0));
    const DeterminationProbe& probe = rep.probes[0];
    CHECK(probe.diagonal_discrepancy == doctest::Approx(0.3));
    CHECK(std::abs(probe.limit_discrepancy - 0.3) <= probe.first.error + probe.second.error + 1e-3);
  }
}

TEST_CASE("stability probe") {
  const DomainPtr d = line();

  SUBCASE("identical coefficients") {
    const Coefficient sigma = Coefficient::sinusoidal(2.0, 1.0);
    const StabilityReport rep = stability_probe(sigma, sigma, d, BumpProfile::standard(), sequence(), params_for(2.0));
    for (double diff : rep.differences) CHECK(diff <= 1e-10);
    CHECK(rep.target == 0.0);
  }
  SUBCASE("constant shift") {
    const Coefficient sigma = Coefficient::constant(1.0);
    const StabilityReport rep =
        stability_probe(sigma, sigma.shifted(0.25), d, BumpProfile::standard(), sequence(), params_for(3.0));
    CHECK(rep.target == doctest::Approx(0.25));
    CHECK(std::abs(rep.limit.limit - 0.25) <= 1e-4);
    CHECK(rep.operator_norm_lower_bound >= rep.differences.back());
  }
  SUBCASE("separable coefficients with different profiles") {
    const Coefficient sigma1 = gamma_sigma(0.5);
    const Coefficient sigma2 = gamma_sigma(1.0);
    const StabilityReport rep = stability_probe(sigma1, sigma2, d, BumpProfile::standard(), sequence(), params_for(2.0));
    CHECK(rep.target == doctest::Approx(0.5));
    CHECK(rep.error <= 0.05 * rep.target);
  }
}
