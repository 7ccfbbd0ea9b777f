#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracdn {

/// Environment variable that overrides the results directory.
inline constexpr const char* kOutputDirEnv = "FRACDN_OUTPUT_DIR";

struct StoredRun {
  std::string id;
  nlohmann::json config;
  nlohmann::json records;
  nlohmann::json summary;
  std::string log;
  /// file name -> contents
  std::map<std::string, std::string> csv;
};

/// Directory of runs, one subdirectory per config hash:
///   <root>/runs/<id>/{config.json, records.json, summary.json, run.log, *.csv}
class ResultsStore {
 public:
  explicit ResultsStore(std::filesystem::path root) : root_(std::move(root)) {}

  /// Explicit directory, else $FRACDN_OUTPUT_DIR, else the config's
  /// output_dir, else ./fracdn-results.
  static std::filesystem::path resolve_root(const std::optional<std::string>& explicit_dir,
                                            const std::optional<std::string>& config_dir);

  /// FNV-1a 64-bit hash of the canonical (key-sorted) dump, without
  /// output_dir, as 16 hex digits.
  static std::string run_id(const nlohmann::json& config);

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path run_dir(const std::string& id) const { return root_ / "runs" / id; }
  bool contains(const std::string& id) const;
  std::vector<std::string> list() const;

  /// Writes the run through a temporary directory and renames it into place,
  /// replacing an earlier run with the same id.
  void save(const StoredRun& run) const;
  /// Throws Error("unknown run id ...") when absent.
  StoredRun load(const std::string& id) const;

 private:
  std::filesystem::path root_;
};

}  // namespace fracdn
