#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracdn/coefficient.hpp"
#include "fracdn/errors.hpp"
#include "fracdn/grid.hpp"
#include "fracdn/solver.hpp"
#include "fracdn/testfn.hpp"

namespace fracdn {

/// A configuration problem; key() names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class ExperimentKind { kSeminormCheck, kSolve, kPair, kReconstruct, kDetermine, kStability, kVerifyInequalities };

std::string experiment_name(ExperimentKind kind);

struct DomainSpec {
  int dim = 1;
  /// Unset: 4 diam(Omega u W) from the origin.
  std::optional<double> half_width;
  /// Unset: the largest power of two not exceeding r0 / (8 max N).
  std::optional<double> spacing;
  Region omega;
  Region w;
};

/// Exterior data for the solve and pair experiments.
struct DataSpec {
  enum class Kind { kBump, kRandom };
  Kind kind = Kind::kBump;
  /// kBump: Phi_N at the sequence's x0 and r0.
  int n = 1;
  /// kRandom: uniform values in [-amplitude, amplitude] on W.
  double amplitude = 1.0;
};

struct InequalitySpec {
  double p = 2.0;
  std::size_t samples = 1000000;
};

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::kReconstruct;
  DomainSpec domain;
  /// Coefficient specs as given; resolved against the domain by
  /// build_coefficient.
  nlohmann::json coefficient;
  nlohmann::json coefficient2;
  FracParams params;
  /// C of the pointwise fractional p-Laplacian diagnostic.
  double normalization_constant = 1.0;
  TestSequenceConfig sequence;
  std::string profile = "mollifier";
  std::vector<double> seminorm_orders;
  std::vector<Point> probe_points;
  DataSpec data_f;
  DataSpec data_g;
  InequalitySpec inequalities;
  std::uint64_t seed = 1;
  std::optional<std::string> output_dir;
  /// Directory of the config file; relative table paths resolve against it.
  std::filesystem::path base_dir;
  /// The document as parsed, used for hashing and snapshots.
  nlohmann::json document;
};

/// Parses and validates a config document. Every failure throws ConfigError
/// naming the key.
RunConfig parse_run_config(const nlohmann::json& document, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Grid for a config (defaults filled in).
DomainPtr build_domain(const RunConfig& config);

/// Resolves a coefficient spec from the registry: constant, separable,
/// sinusoidal, pair-bump, tabulated; "plus" adds further specs and "shift"
/// a constant.
Coefficient build_coefficient(const nlohmann::json& spec, const DomainPtr& domain,
                              const std::filesystem::path& base_dir, const std::string& key = "coefficient");

/// Writes a tabulated coefficient as little-endian float64 values over node
/// pairs, with a JSON sidecar (path + ".json") describing the grid.
void write_coefficient_table(const std::filesystem::path& path, const GridDomain& domain,
                             const std::vector<double>& table);
std::vector<double> read_coefficient_table(const std::filesystem::path& path, const GridDomain& domain);

}  // namespace fracdn
