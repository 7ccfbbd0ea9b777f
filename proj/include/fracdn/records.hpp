#pragma once

#include <string>

#include <json.hpp>

#include "fracdn/recon.hpp"

namespace fracdn {

void to_json(nlohmann::json& j, const Extrapolation& e);
void from_json(const nlohmann::json& j, Extrapolation& e);
void to_json(nlohmann::json& j, const ExperimentRow& r);
void from_json(const nlohmann::json& j, ExperimentRow& r);
void to_json(nlohmann::json& j, const ExperimentRecord& r);
void from_json(const nlohmann::json& j, ExperimentRecord& r);

inline constexpr const char* kExperimentCsvHeader = "N,pairing,energy,correction,u_minus_phi_norm,iterations";

/// Header plus one line per row, values printed with 17 significant digits.
/// A failed record ends with a "FAILED,,,,," marker row.
std::string experiment_csv(const ExperimentRecord& record);

/// %.17g
std::string format_double(double v);

}  // namespace fracdn
