#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracdn/coefficient.hpp"
#include "fracdn/grid.hpp"
#include "fracdn/solver.hpp"
#include "fracdn/testfn.hpp"

namespace fracdn {

struct ExperimentRow {
  int n = 0;
  double pairing = 0.0;
  double energy = 0.0;
  double correction = 0.0;
  double u_minus_phi_norm = 0.0;
  int iterations = 0;
  bool converged = true;
  std::optional<double> epsilon_sensitivity;
};

/// Limit estimate of a sequence a(N) ~ L + A N^{-q}.
struct Extrapolation {
  double limit = 0.0;
  /// Fitted q; zero when no fit was made.
  double rate = 0.0;
  /// True when the tail was unusable and the last value was taken.
  bool fallback = false;
  std::string note;
};

/// Fits L + A N^{-q} through the last three (N, a) pairs. A non-monotone or
/// non-contracting tail falls back to the last value and sets `fallback`;
/// a tail already flat to roundoff returns the last value without the flag.
Extrapolation extrapolate_limit(std::span<const int> n, std::span<const double> a);

struct ExperimentRecord {
  std::string label;
  /// Serialized configuration, filled in by the caller that owns it.
  std::string config_snapshot;
  Point x0{};
  double r0 = 0.0;
  double h = 0.0;
  double s = 0.0;
  double p = 0.0;
  std::string profile;
  std::vector<ExperimentRow> rows;
  /// sigma(x0, x0)
  double target = 0.0;
  Extrapolation pairing_limit;
  Extrapolation energy_limit;
  /// |pairing_limit - target|
  double error = 0.0;

  /// A row failed; rows holds the completed prefix.
  bool failed = false;
  std::string failure;
  bool nonconverged = false;
  /// pairing - energy and the directly summed correction disagree.
  bool inconsistent = false;
};

/// Runs Phi_N for every N of `sequence` (its s and p are taken from params),
/// solves the exterior problem and records pairing, energy and correction.
/// Per-N errors are caught and stored in the record.
ExperimentRecord reconstruct_diagonal(const Coefficient& sigma, const DomainPtr& domain, const BumpProfile& profile,
                                      const TestSequenceConfig& sequence, const FracParams& params);

struct DeterminationProbe {
  Point x0{};
  ExperimentRecord first;
  ExperimentRecord second;
  /// |limit_1 - limit_2|
  double limit_discrepancy = 0.0;
  /// |Sigma_1(x0) - Sigma_2(x0)|
  double diagonal_discrepancy = 0.0;
  /// max_N |pairing_1 - pairing_2|
  double max_pairing_gap = 0.0;
  bool pairings_agree = false;
  /// False only when the pairings agree but the limits do not.
  bool consistent = true;
};

struct DeterminationReport {
  double tolerance = 0.0;
  std::vector<DeterminationProbe> probes;
};

DeterminationReport exterior_determination(const Coefficient& sigma1, const Coefficient& sigma2,
                                           std::span<const Point> probe_points, const DomainPtr& domain,
                                           const BumpProfile& profile, const TestSequenceConfig& sequence,
                                           const FracParams& params, double tolerance = 1e-10);

struct StabilityReport {
  ExperimentRecord first;
  ExperimentRecord second;
  /// |<(Lambda_1 - Lambda_2) Phi_N, Phi_N>|; each is a lower bound for the
  /// operator norm of Lambda_1 - Lambda_2.
  std::vector<double> differences;
  Extrapolation limit;
  /// |sigma_1(x0, x0) - sigma_2(x0, x0)|
  double target = 0.0;
  double error = 0.0;
  double operator_norm_lower_bound = 0.0;
};

StabilityReport stability_probe(const Coefficient& sigma1, const Coefficient& sigma2, const DomainPtr& domain,
                                const BumpProfile& profile, const TestSequenceConfig& sequence,
                                const FracParams& params);

}  // namespace fracdn
