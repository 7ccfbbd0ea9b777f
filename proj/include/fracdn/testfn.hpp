#pragma once

#include <string>
#include <vector>

#include "fracdn/grid.hpp"

namespace fracdn {

/// Smooth profile psi with supp(psi) = [-1, 1].
class BumpProfile {
 public:
  enum class Kind {
    kStandard,  ///< exp(-1 / (1 - t^2))
    kFlatTop,   ///< exp(-1 / (1 - t^4))
  };

  static BumpProfile standard() { return BumpProfile(Kind::kStandard); }
  static BumpProfile flat_top() { return BumpProfile(Kind::kFlatTop); }
  /// "mollifier" or "flat-top"; throws ParameterError otherwise.
  static BumpProfile from_name(const std::string& name);

  double operator()(double t) const noexcept;
  std::string name() const;
  Kind kind() const noexcept { return kind_; }

 private:
  explicit BumpProfile(Kind kind) : kind_(kind) {}
  Kind kind_;
};

struct TestSequenceConfig {
  Point x0{};
  std::vector<int> n_list{1, 2, 4, 8};
  double s = 0.5;
  double p = 2.0;
  /// Half width of the base cube Q_{r0}(x0), which must lie in W.
  double r0 = 0.5;
};

/// Minimum number of nodes per axis strictly inside the support.
inline constexpr int kMinSupportNodes = 8;

/// Nodes strictly inside (x0_k - r, x0_k + r), minimised over the axes.
int support_nodes_per_axis(const GridDomain& domain, const Point& x0, double r);

/// Largest spacing that guarantees kMinSupportNodes nodes inside a support of
/// half width r.
double required_spacing(double r);

/// Psi_N(x) = prod_k psi(N (x_k - x0_k) / r0), supported in Q_{r0/N}(x0).
/// Throws ResolutionError when fewer than kMinSupportNodes nodes per axis fall
/// inside the support, and ParameterError when the cube leaves W.
GridFunction tensor_bump(const BumpProfile& profile, const Point& x0, double r0, int n,
                         const DomainPtr& domain);

/// Phi_N = Psi_N / [Psi_N]_{W^{s,p}}.
GridFunction normalize_phi(const GridFunction& psi, double s, double p);

/// One normalized Phi_N per entry of n_list.
std::vector<GridFunction> make_sequence(const TestSequenceConfig& config, const DomainPtr& domain,
                                        const BumpProfile& profile);

}  // namespace fracdn
