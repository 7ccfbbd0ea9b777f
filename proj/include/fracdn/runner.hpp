#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "fracdn/config.hpp"

namespace fracdn {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitConfigError = 2,
  kExitNonConvergence = 3,
  kExitInconsistent = 4,
};

struct RunOutcome {
  nlohmann::json records;
  nlohmann::json summary;
  std::map<std::string, std::string> csv;
  int exit_code = kExitSuccess;
};

/// Executes the experiment of a validated config. Progress lines go to log.
RunOutcome execute(const RunConfig& config, std::ostream& log);

/// Human-readable table of a stored summary.
std::string summary_table(const nlohmann::json& summary);

}  // namespace fracdn
