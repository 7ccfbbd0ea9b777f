#include "fracdn/config.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

namespace fracdn {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(path, "must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError(join(path, k), "unknown key");
  }
}

const json* find(const json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& j, const std::string& key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) throw ConfigError(join(path, key), "missing");
  if (!v->is_number()) throw ConfigError(join(path, key), "must be a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(path, key), "must be finite");
  return x;
}

double number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
  return find(j, key) ? number(j, key, path) : fallback;
}

std::string text(const json& j, const std::string& key, const std::string& path) {
  const json* v = find(j, key);
  if (!v) throw ConfigError(join(path, key), "missing");
  if (!v->is_string()) throw ConfigError(join(path, key), "must be a string");
  return v->get<std::string>();
}

Point point(const json& v, int dim, const std::string& path) {
  if (v.is_number() && dim == 1) return {v.get<double>(), 0.0};
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    throw ConfigError(path, "must be an array of " + std::to_string(dim) + " numbers");
  }
  Point out{};
  for (int k = 0; k < dim; ++k) {
    if (!v[k].is_number()) throw ConfigError(path, "must contain numbers");
    out[k] = v[k].get<double>();
  }
  return out;
}

Region region(const json& j, int dim, const std::string& path) {
  allow_keys(j, path, {"shape", "center", "half_width", "radius"});
  const std::string shape = find(j, "shape") ? text(j, "shape", path) : "box";
  const json* c = find(j, "center");
  if (!c) throw ConfigError(join(path, "center"), "missing");
  const Point center = point(*c, dim, join(path, "center"));
  if (shape == "box") {
    const double hw = number(j, "half_width", path);
    if (!(hw > 0.0)) throw ConfigError(join(path, "half_width"), "must be positive");
    return Region::box(center, hw);
  }
  if (shape == "ball") {
    const double r = number(j, "radius", path);
    if (!(r > 0.0)) throw ConfigError(join(path, "radius"), "must be positive");
    return Region::ball(center, r);
  }
  throw ConfigError(join(path, "shape"), "must be \"box\" or \"ball\"");
}

ScalarField scalar_field(const json& j, int dim, const std::string& path) {
  allow_keys(j, path, {"kind", "value", "base", "amplitude", "center", "width", "frequency", "phase"});
  const std::string kind = text(j, "kind", path);
  if (kind == "constant") return ScalarField::constant(number(j, "value", path));
  const double base = number(j, "base", path);
  const double amplitude = number(j, "amplitude", path);
  if (kind == "sine") {
    return ScalarField::sine(base, amplitude, number_or(j, "frequency", path, 1.0), number_or(j, "phase", path, 0.0));
  }
  const json* c = find(j, "center");
  if (!c) throw ConfigError(join(path, "center"), "missing");
  const Point center = point(*c, dim, join(path, "center"));
  const double width = number(j, "width", path);
  if (!(width > 0.0)) throw ConfigError(join(path, "width"), "must be positive");
  if (kind == "gaussian") return ScalarField::gaussian(base, amplitude, center, width);
  if (kind == "bump") return ScalarField::bump(base, amplitude, center, width);
  throw ConfigError(join(path, "kind"), "unknown field kind \"" + kind + "\" (constant, gaussian, sine, bump)");
}

DataSpec data_spec(const json& j, const std::string& path) {
  allow_keys(j, path, {"kind", "N", "amplitude"});
  DataSpec out;
  const std::string kind = find(j, "kind") ? text(j, "kind", path) : "bump";
  if (kind == "bump") {
    out.kind = DataSpec::Kind::kBump;
    const double n = number_or(j, "N", path, 1.0);
    if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError(join(path, "N"), "must be a positive integer");
    out.n = static_cast<int>(n);
  } else if (kind == "random") {
    out.kind = DataSpec::Kind::kRandom;
    out.amplitude = number_or(j, "amplitude", path, 1.0);
    if (!(out.amplitude > 0.0)) throw ConfigError(join(path, "amplitude"), "must be positive");
  } else {
    throw ConfigError(join(path, "kind"), "must be \"bump\" or \"random\"");
  }
  return out;
}

double dyadic_floor(double x) { return std::exp2(std::floor(std::log2(x))); }

bool little_endian() { return std::endian::native == std::endian::little; }

std::uint64_t swap_bytes(std::uint64_t v) {
  std::uint64_t out = 0;
  for (int b = 0; b < 8; ++b) out |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return out;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSeminormCheck: return "seminorm-check";
    case ExperimentKind::kSolve: return "solve";
    case ExperimentKind::kPair: return "pair";
    case ExperimentKind::kReconstruct: return "reconstruct";
    case ExperimentKind::kDetermine: return "determine";
    case ExperimentKind::kStability: return "stability";
    case ExperimentKind::kVerifyInequalities: return "verify-inequalities";
  }
  return "reconstruct";
}

RunConfig parse_run_config(const json& document, const std::filesystem::path& base_dir) {
  allow_keys(document, "", {"experiment", "domain", "coefficient", "coefficient2", "params", "sequence", "seminorm",
                            "probe_points", "data", "inequalities", "seed", "output_dir"});
  RunConfig config;
  config.document = document;
  config.base_dir = base_dir;

  const std::string kind = text(document, "experiment", "");
  bool known = false;
  for (auto k : {ExperimentKind::kSeminormCheck, ExperimentKind::kSolve, ExperimentKind::kPair,
                 ExperimentKind::kReconstruct, ExperimentKind::kDetermine, ExperimentKind::kStability,
                 ExperimentKind::kVerifyInequalities}) {
    if (experiment_name(k) == kind) {
      config.experiment = k;
      known = true;
    }
  }
  if (!known) throw ConfigError("experiment", "unknown experiment \"" + kind + "\"");

  if (const json* seed = find(document, "seed")) {
    if (!seed->is_number_unsigned()) throw ConfigError("seed", "must be a nonnegative integer");
    config.seed = seed->get<std::uint64_t>();
  }
  if (const json* out = find(document, "output_dir")) {
    if (!out->is_string()) throw ConfigError("output_dir", "must be a string");
    config.output_dir = out->get<std::string>();
  }

  // params
  if (const json* p = find(document, "params")) {
    allow_keys(*p, "params",
               {"s", "p", "epsilon_reg", "gradient_tol", "max_iterations", "epsilon_sensitivity", "normalization_constant"});
    config.normalization_constant = number_or(*p, "normalization_constant", "params", 1.0);
    if (!(config.normalization_constant > 0.0)) {
      throw ConfigError("params.normalization_constant", "must be positive");
    }
    FracParams& fp = config.params;
    fp.s = number_or(*p, "s", "params", fp.s);
    fp.p = number_or(*p, "p", "params", fp.p);
    if (find(*p, "epsilon_reg")) fp.epsilon_reg = number(*p, "epsilon_reg", "params");
    fp.gradient_tol = number_or(*p, "gradient_tol", "params", fp.gradient_tol);
    const double iters = number_or(*p, "max_iterations", "params", fp.max_iterations);
    if (!(iters >= 0.0) || iters != std::floor(iters) || iters > 1e9) {
      throw ConfigError("params.max_iterations", "must be a nonnegative integer");
    }
    fp.max_iterations = static_cast<int>(iters);
    if (const json* e = find(*p, "epsilon_sensitivity")) {
      if (!e->is_boolean()) throw ConfigError("params.epsilon_sensitivity", "must be a boolean");
      fp.epsilon_sensitivity = e->get<bool>();
    }
  }
  if (!(config.params.s > 0.0 && config.params.s < 1.0)) throw ConfigError("params.s", "s must satisfy 0 < s < 1");
  if (!(config.params.p > 1.0)) throw ConfigError("params.p", "p must exceed 1");
  try {
    config.params.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("params", e.what());
  }

  if (config.experiment == ExperimentKind::kVerifyInequalities) {
    if (const json* q = find(document, "inequalities")) {
      allow_keys(*q, "inequalities", {"p", "samples"});
      config.inequalities.p = number_or(*q, "p", "inequalities", config.params.p);
      const double n = number_or(*q, "samples", "inequalities", 1e6);
      if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("inequalities.samples", "must be a positive integer");
      config.inequalities.samples = static_cast<std::size_t>(n);
    } else {
      config.inequalities.p = config.params.p;
    }
    if (!(config.inequalities.p > 1.0)) throw ConfigError("inequalities.p", "p must exceed 1");
    return config;
  }

  // domain
  const json* d = find(document, "domain");
  if (!d) throw ConfigError("domain", "missing");
  allow_keys(*d, "domain", {"dim", "R", "h", "omega", "w"});
  const double dim = number_or(*d, "dim", "domain", 1.0);
  if (dim != 1.0 && dim != 2.0) throw ConfigError("domain.dim", "must be 1 or 2");
  config.domain.dim = static_cast<int>(dim);
  const int n = config.domain.dim;
  if (find(*d, "R")) {
    config.domain.half_width = number(*d, "R", "domain");
    if (!(*config.domain.half_width > 0.0)) throw ConfigError("domain.R", "must be positive");
  }
  if (find(*d, "h")) {
    config.domain.spacing = number(*d, "h", "domain");
    if (!(*config.domain.spacing > 0.0)) throw ConfigError("domain.h", "must be positive");
  }
  const json* om = find(*d, "omega");
  const json* w = find(*d, "w");
  if (!om) throw ConfigError("domain.omega", "missing");
  if (!w) throw ConfigError("domain.w", "missing");
  config.domain.omega = region(*om, n, "domain.omega");
  config.domain.w = region(*w, n, "domain.w");

  // sequence
  TestSequenceConfig& seq = config.sequence;
  seq.x0 = config.domain.w.center;
  if (const json* s = find(document, "sequence")) {
    allow_keys(*s, "sequence", {"x0", "r0", "N_list", "profile"});
    if (const json* x0 = find(*s, "x0")) seq.x0 = point(*x0, n, "sequence.x0");
    seq.r0 = number_or(*s, "r0", "sequence", seq.r0);
    if (!(seq.r0 > 0.0)) throw ConfigError("sequence.r0", "must be positive");
    if (const json* list = find(*s, "N_list")) {
      if (!list->is_array() || list->empty()) throw ConfigError("sequence.N_list", "must be a nonempty array");
      seq.n_list.clear();
      for (const json& v : *list) {
        if (!v.is_number_integer() || v.get<long long>() < 1) {
          throw ConfigError("sequence.N_list", "entries must be positive integers");
        }
        if (!seq.n_list.empty() && v.get<int>() <= seq.n_list.back()) {
          throw ConfigError("sequence.N_list", "must be strictly increasing");
        }
        seq.n_list.push_back(v.get<int>());
      }
    }
    if (find(*s, "profile")) config.profile = text(*s, "profile", "sequence");
  }
  seq.s = config.params.s;
  seq.p = config.params.p;
  try {
    BumpProfile::from_name(config.profile);
  } catch (const Error& e) {
    throw ConfigError("sequence.profile", e.what());
  }

  if (const json* pts = find(document, "probe_points")) {
    if (!pts->is_array() || pts->empty()) throw ConfigError("probe_points", "must be a nonempty array");
    for (std::size_t k = 0; k < pts->size(); ++k) {
      config.probe_points.push_back(point((*pts)[k], n, "probe_points[" + std::to_string(k) + "]"));
    }
  } else {
    config.probe_points.push_back(seq.x0);
  }

  if (const json* sm = find(document, "seminorm")) {
    allow_keys(*sm, "seminorm", {"orders"});
    if (const json* orders = find(*sm, "orders")) {
      if (!orders->is_array()) throw ConfigError("seminorm.orders", "must be an array");
      for (const json& t : *orders) {
        if (!t.is_number() || !(t.get<double>() > 0.0 && t.get<double>() < 1.0)) {
          throw ConfigError("seminorm.orders", "entries must lie in (0, 1)");
        }
        config.seminorm_orders.push_back(t.get<double>());
      }
    }
  }
  if (config.seminorm_orders.empty()) config.seminorm_orders = {0.5 * config.params.s};

  if (const json* data = find(document, "data")) {
    allow_keys(*data, "data", {"f", "g"});
    if (const json* f = find(*data, "f")) config.data_f = data_spec(*f, "data.f");
    if (const json* g = find(*data, "g")) config.data_g = data_spec(*g, "data.g");
  }

  // Build the grid now so every geometric problem surfaces before any solve.
  DomainPtr domain;
  try {
    domain = build_domain(config);
  } catch (const Error& e) {
    throw ConfigError("domain", e.what());
  }
  std::vector<Point> centres = config.probe_points;
  centres.push_back(seq.x0);
  const int n_max = std::max({seq.n_list.back(), config.data_f.n, config.data_g.n});
  for (const Point& x0 : centres) {
    if (!domain->w_region().contains_cube(x0, seq.r0, n)) {
      throw ConfigError("sequence.r0", "the cube of half width r0 around each probe point must lie in W");
    }
    if (support_nodes_per_axis(*domain, x0, seq.r0 / n_max) < kMinSupportNodes) {
      throw ConfigError("domain.h", "grid does not resolve the support at N = " + std::to_string(n_max) +
                                        "; need h <= " + std::to_string(required_spacing(seq.r0 / n_max)));
    }
  }

  const json* c1 = find(document, "coefficient");
  if (c1) {
    config.coefficient = *c1;
    build_coefficient(config.coefficient, domain, base_dir, "coefficient");
  } else if (config.experiment != ExperimentKind::kSeminormCheck) {
    throw ConfigError("coefficient", "missing");
  }
  const bool needs_second =
      config.experiment == ExperimentKind::kDetermine || config.experiment == ExperimentKind::kStability;
  if (const json* c2 = find(document, "coefficient2")) {
    config.coefficient2 = *c2;
    build_coefficient(config.coefficient2, domain, base_dir, "coefficient2");
  } else if (needs_second) {
    throw ConfigError("coefficient2", "missing (required by " + kind + ")");
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(document, path.parent_path());
}

DomainPtr build_domain(const RunConfig& config) {
  const DomainSpec& d = config.domain;
  const double R = d.half_width.value_or(default_half_width(d.dim, d.omega, d.w));
  int n_max = config.sequence.n_list.empty() ? 1 : config.sequence.n_list.back();
  n_max = std::max({n_max, config.data_f.n, config.data_g.n});
  const double h = d.spacing.value_or(dyadic_floor(config.sequence.r0 / (8.0 * n_max)));
  return build_domain(d.dim, R, h, d.omega, d.w);
}

Coefficient build_coefficient(const json& spec, const DomainPtr& domain, const std::filesystem::path& base_dir,
                              const std::string& key) {
  allow_keys(spec, key,
             {"family", "value", "gamma", "base", "amplitude", "frequency", "center_x", "center_y", "radius", "path",
              "plus", "shift", "lambda"});
  const std::string family = text(spec, "family", key);
  const int dim = domain->dim();
  std::optional<Coefficient> out;
  try {
    if (family == "constant") {
      const double c = number(spec, "value", key);
      if (!(c > 0.0)) throw ConfigError(join(key, "value"), "must be positive");
      out = Coefficient::constant(c);
    } else if (family == "separable") {
      const json* g = find(spec, "gamma");
      if (!g) throw ConfigError(join(key, "gamma"), "missing");
      out = Coefficient::separable(scalar_field(*g, dim, join(key, "gamma")));
    } else if (family == "sinusoidal") {
      out = Coefficient::sinusoidal(number(spec, "base", key), number(spec, "amplitude", key),
                                    number_or(spec, "frequency", key, 1.0));
    } else if (family == "pair-bump") {
      // base + amplitude * beta(x - cx) beta(y - cy), beta a unit bump of the
      // given radius.
      const double r = number(spec, "radius", key);
      if (!(r > 0.0)) throw ConfigError(join(key, "radius"), "must be positive");
      const json* cx = find(spec, "center_x");
      const json* cy = find(spec, "center_y");
      if (!cx) throw ConfigError(join(key, "center_x"), "missing");
      if (!cy) throw ConfigError(join(key, "center_y"), "missing");
      const double a = number(spec, "amplitude", key);
      Factor fx = Factor::of(ScalarField::bump(0.0, a, point(*cx, dim, join(key, "center_x")), r));
      Factor fy = Factor::of(ScalarField::bump(0.0, 1.0, point(*cy, dim, join(key, "center_y")), r));
      out = Coefficient::rank_one(std::move(fx), std::move(fy), number(spec, "base", key));
    } else if (family == "tabulated") {
      std::filesystem::path path = text(spec, "path", key);
      if (path.is_relative()) path = base_dir / path;
      out = Coefficient::tabulated(domain, read_coefficient_table(path, *domain));
    } else {
      throw ConfigError(join(key, "family"), "unknown family \"" + family +
                                                 "\" (constant, separable, sinusoidal, pair-bump, tabulated)");
    }
    if (const json* plus = find(spec, "plus")) {
      if (!plus->is_array()) throw ConfigError(join(key, "plus"), "must be an array");
      for (std::size_t k = 0; k < plus->size(); ++k) {
        *out = *out + build_coefficient((*plus)[k], domain, base_dir, join(key, "plus[" + std::to_string(k) + "]"));
      }
    }
    if (find(spec, "shift")) *out = out->shifted(number(spec, "shift", key));
    if (find(spec, "lambda")) *out = out->with_lambda(number(spec, "lambda", key));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
  return *out;
}

void write_coefficient_table(const std::filesystem::path& path, const GridDomain& domain,
                             const std::vector<double>& table) {
  const std::size_t m = domain.size();
  if (table.size() != m * m) throw ParameterError("table must hold one value per ordered node pair");
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw Error("cannot write " + path.string());
  for (double v : table) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    if (!little_endian()) bits = swap_bytes(bits);
    bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
  const json sidecar = {{"dim", domain.dim()},
                        {"R", domain.half_width()},
                        {"h", domain.spacing()},
                        {"nodes", m},
                        {"format", "float64-le"}};
  std::ofstream side(path.string() + ".json");
  side << sidecar.dump(2) << "\n";
}

std::vector<double> read_coefficient_table(const std::filesystem::path& path, const GridDomain& domain) {
  std::ifstream side(path.string() + ".json");
  if (!side) throw ConfigError("path", "missing sidecar " + path.string() + ".json");
  json meta;
  try {
    meta = json::parse(side);
  } catch (const json::parse_error& e) {
    throw ConfigError("path", std::string("invalid sidecar: ") + e.what());
  }
  const std::size_t m = domain.size();
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  if (meta.value("format", "") != "float64-le" || meta.value("dim", 0) != domain.dim() ||
      meta.value("nodes", std::size_t{0}) != m || !close(meta.value("h", 0.0), domain.spacing()) ||
      !close(meta.value("R", 0.0), domain.half_width())) {
    throw ConfigError("path", "table sidecar does not match the run's grid");
  }
  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw ConfigError("path", "cannot open " + path.string());
  std::vector<double> table(m * m);
  for (double& v : table) {
    std::uint64_t bits = 0;
    if (!bin.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw ConfigError("path", "table file is truncated");
    if (!little_endian()) bits = swap_bytes(bits);
    v = std::bit_cast<double>(bits);
  }
  if (bin.peek() != std::char_traits<char>::eof()) throw ConfigError("path", "table file has trailing data");
  return table;
}

}  // namespace fracdn
