#include "fracdn/records.hpp"

#include <cstdio>

namespace fracdn {

using nlohmann::json;

void to_json(json& j, const Extrapolation& e) {
  j = json{{"limit", e.limit}, {"rate", e.rate}, {"fallback", e.fallback}, {"note", e.note}};
}

void from_json(const json& j, Extrapolation& e) {
  j.at("limit").get_to(e.limit);
  j.at("rate").get_to(e.rate);
  j.at("fallback").get_to(e.fallback);
  j.at("note").get_to(e.note);
}

void to_json(json& j, const ExperimentRow& r) {
  j = json{{"N", r.n},
           {"pairing", r.pairing},
           {"energy", r.energy},
           {"correction", r.correction},
           {"u_minus_phi_norm", r.u_minus_phi_norm},
           {"iterations", r.iterations},
           {"converged", r.converged},
           {"epsilon_sensitivity", r.epsilon_sensitivity ? json(*r.epsilon_sensitivity) : json(nullptr)}};
}

void from_json(const json& j, ExperimentRow& r) {
  j.at("N").get_to(r.n);
  j.at("pairing").get_to(r.pairing);
  j.at("energy").get_to(r.energy);
  j.at("correction").get_to(r.correction);
  j.at("u_minus_phi_norm").get_to(r.u_minus_phi_norm);
  j.at("iterations").get_to(r.iterations);
  j.at("converged").get_to(r.converged);
  const json& e = j.at("epsilon_sensitivity");
  r.epsilon_sensitivity = e.is_null() ? std::nullopt : std::optional<double>(e.get<double>());
}

void to_json(json& j, const ExperimentRecord& r) {
  j = json{{"label", r.label},
           {"config", r.config_snapshot},
           {"x0", r.x0},
           {"r0", r.r0},
           {"h", r.h},
           {"s", r.s},
           {"p", r.p},
           {"profile", r.profile},
           {"rows", r.rows},
           {"target", r.target},
           {"pairing_limit", r.pairing_limit},
           {"energy_limit", r.energy_limit},
           {"error", r.error},
           {"failed", r.failed},
           {"failure", r.failure},
           {"nonconverged", r.nonconverged},
           {"inconsistent", r.inconsistent}};
}

void from_json(const json& j, ExperimentRecord& r) {
  j.at("label").get_to(r.label);
  j.at("config").get_to(r.config_snapshot);
  j.at("x0").get_to(r.x0);
  j.at("r0").get_to(r.r0);
  j.at("h").get_to(r.h);
  j.at("s").get_to(r.s);
  j.at("p").get_to(r.p);
  j.at("profile").get_to(r.profile);
  j.at("rows").get_to(r.rows);
  j.at("target").get_to(r.target);
  j.at("pairing_limit").get_to(r.pairing_limit);
  j.at("energy_limit").get_to(r.energy_limit);
  j.at("error").get_to(r.error);
  j.at("failed").get_to(r.failed);
  j.at("failure").get_to(r.failure);
  j.at("nonconverged").get_to(r.nonconverged);
  j.at("inconsistent").get_to(r.inconsistent);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string experiment_csv(const ExperimentRecord& record) {
  std::string out = kExperimentCsvHeader;
  out += "\n";
  for (const ExperimentRow& row : record.rows) {
    out += std::to_string(row.n) + "," + format_double(row.pairing) + "," + format_double(row.energy) + "," +
           format_double(row.correction) + "," + format_double(row.u_minus_phi_norm) + "," +
           std::to_string(row.iterations) + "\n";
  }
  if (record.failed) out += "FAILED,,,,,\n";
  return out;
}

}  // namespace fracdn
