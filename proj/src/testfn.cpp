#include "fracdn/testfn.hpp"

#include <cmath>
#include <sstream>

#include "fracdn/errors.hpp"
#include "fracdn/quadrature.hpp"

namespace fracdn {

BumpProfile BumpProfile::from_name(const std::string& name) {
  if (name == "mollifier") return standard();
  if (name == "flat-top") return flat_top();
  throw ParameterError("unknown bump profile '" + name + "' (expected mollifier or flat-top)");
}

double BumpProfile::operator()(double t) const noexcept {
  const double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  const double q = kind_ == Kind::kStandard ? a * a : a * a * a * a;
  return std::exp(-1.0 / (1.0 - q));
}

std::string BumpProfile::name() const { return kind_ == Kind::kStandard ? "mollifier" : "flat-top"; }

int support_nodes_per_axis(const GridDomain& domain, const Point& x0, double r) {
  int best = -1;
  for (int k = 0; k < domain.dim(); ++k) {
    int count = 0;
    for (std::size_t a = 0; a < domain.nodes_per_axis(); ++a) {
      if (std::abs(domain.axis_coordinate(a) - x0[k]) < r) ++count;
    }
    best = best < 0 ? count : std::min(best, count);
  }
  return best;
}

double required_spacing(double r) { return 2.0 * r / (kMinSupportNodes + 1); }

GridFunction tensor_bump(const BumpProfile& profile, const Point& x0, double r0, int n, const DomainPtr& domain) {
  if (n < 1) throw ParameterError("scaling index N must be a positive integer");
  if (!(r0 > 0.0)) throw ParameterError("base half width r0 must be positive");
  const double r = r0 / n;
  const int dim = domain->dim();
  if (!domain->w_region().contains_cube(x0, r, dim)) {
    std::ostringstream msg;
    msg << "support cube Q_" << r << "(x0) of Psi_" << n << " is not contained in W";
    throw ParameterError(msg.str());
  }
  const int inside = support_nodes_per_axis(*domain, x0, r);
  if (inside < kMinSupportNodes) {
    std::ostringstream msg;
    msg << "support of Psi_" << n << " is under-resolved: " << inside << " nodes per axis, need "
        << kMinSupportNodes << "; use h <= " << required_spacing(r);
    throw ResolutionError(msg.str(), required_spacing(r));
  }
  GridFunction out(domain);
  const double scale = n / r0;
  for (std::size_t i = 0; i < domain->size(); ++i) {
    const Point x = domain->point(i);
    double v = 1.0;
    for (int k = 0; k < dim && v != 0.0; ++k) v *= profile(scale * (x[k] - x0[k]));
    out[i] = v;
  }
  return out;
}

GridFunction normalize_phi(const GridFunction& psi, double s, double p) {
  const double semi = gagliardo_seminorm(psi, s, p);
  if (!(semi > 0.0)) throw ParameterError("cannot normalize a function with zero seminorm");
  return (1.0 / semi) * psi;
}

std::vector<GridFunction> make_sequence(const TestSequenceConfig& config, const DomainPtr& domain,
                                        const BumpProfile& profile) {
  std::vector<GridFunction> out;
  int previous = 0;
  for (int n : config.n_list) {
    if (n <= previous) throw ParameterError("N_list must be strictly increasing positive integers");
    previous = n;
    out.push_back(normalize_phi(tensor_bump(profile, config.x0, config.r0, n, domain), config.s, config.p));
  }
  return out;
}

}  // namespace fracdn
