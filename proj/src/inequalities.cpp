#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "fracdn/errors.hpp"
#include "fracdn/solver.hpp"

namespace fracdn {

namespace {

using Vec = std::array<double, 3>;

double norm(const Vec& v, int dim) {
  double acc = 0.0;
  for (int k = 0; k < dim; ++k) acc += v[k] * v[k];
  return std::sqrt(acc);
}

struct Ratios {
  double lower;
  double upper;
};

Ratios ratios(const Vec& x, const Vec& y, int dim, double p) {
  const double nx = norm(x, dim), ny = norm(y, dim);
  const double ax = nx == 0.0 ? 0.0 : std::pow(nx, p - 2.0);
  const double ay = ny == 0.0 ? 0.0 : std::pow(ny, p - 2.0);
  Vec diff{}, flux{};
  for (int k = 0; k < dim; ++k) {
    diff[k] = x[k] - y[k];
    flux[k] = ax * x[k] - ay * y[k];
  }
  double lhs = 0.0;
  for (int k = 0; k < dim; ++k) lhs += flux[k] * diff[k];
  const double nd = norm(diff, dim);
  const double sum = nx + ny;
  const double rhs = p >= 2.0 ? std::pow(nd, p) : nd * nd / std::pow(sum, 2.0 - p);
  const double upper = norm(flux, dim) / (std::pow(sum, p - 2.0) * nd);
  return {lhs / rhs, upper};
}

}  // namespace

MonotonicityReport monotonicity_check(double p, std::size_t sample_count, std::uint64_t seed) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("p must exceed 1");
  MonotonicityReport report;
  report.p = p;
  report.lower_form = p >= 2.0 ? "superquadratic" : "subquadratic";
  report.lower_infimum = std::numeric_limits<double>::infinity();
  report.upper_supremum = 0.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_magnitude(-6.0, 6.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> scale_exponent(-30, 30);

  auto draw = [&](int dim) {
    Vec v{};
    double n = 0.0;
    while (n == 0.0) {
      for (int k = 0; k < dim; ++k) v[k] = gauss(rng);
      n = norm(v, dim);
    }
    const double r = std::pow(10.0, log_magnitude(rng)) / n;
    for (int k = 0; k < dim; ++k) v[k] *= r;
    return v;
  };

  for (std::size_t i = 0; i < sample_count; ++i) {
    const int dim = 1 + static_cast<int>(i % 3);
    const Vec x = draw(dim);
    const Vec y = draw(dim);
    const double alpha = std::ldexp(1.0, scale_exponent(rng));
    Vec ax{}, ay{};
    for (int k = 0; k < dim; ++k) {
      ax[k] = alpha * x[k];
      ay[k] = alpha * y[k];
    }
    const Ratios r = ratios(x, y, dim, p);
    const Ratios rs = ratios(ax, ay, dim, p);
    if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || !std::isfinite(rs.lower) ||
        !std::isfinite(rs.upper)) {
      ++report.non_finite;
      continue;
    }
    ++report.samples;
    report.lower_infimum = std::min(report.lower_infimum, r.lower);
    report.upper_supremum = std::max(report.upper_supremum, r.upper);
    report.scale_deviation = std::max(
        {report.scale_deviation, std::abs(rs.lower - r.lower) / r.lower, std::abs(rs.upper - r.upper) / r.upper});
  }
  return report;
}

}  // namespace fracdn
