#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fracdn/config.hpp"
#include "fracdn/parallel.hpp"
#include "fracdn/runner.hpp"
#include "fracdn/solver.hpp"
#include "fracdn/store.hpp"

namespace fs = std::filesystem;
using namespace fracdn;

namespace {

int command_run(const std::string& path, bool force, std::size_t threads, const std::string& out_dir) {
  RunConfig config;
  try {
    config = load_run_config(path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (threads > 0) set_thread_count(threads);
  const ResultsStore store(ResultsStore::resolve_root(
      out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir), config.output_dir));
  const std::string id = ResultsStore::run_id(config.document);
  if (store.contains(id) && !force) {
    const StoredRun stored = store.load(id);
    std::cout << "run " << id << " already stored in " << store.run_dir(id).string()
              << "; skipping (use --force to recompute)\n"
              << summary_table(stored.summary);
    return stored.summary.value("exit_code", 0);
  }
  std::ostringstream log;
  RunOutcome outcome;
  try {
    outcome = execute(config, log);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    // Persist what is known so the failure is visible in the store.
    log << "run failed: " << e.what() << "\n";
    outcome.summary = {{"experiment", experiment_name(config.experiment)}, {"failure", e.what()}};
    outcome.records = {{"experiment", experiment_name(config.experiment)}, {"failure", e.what()}};
    outcome.exit_code = dynamic_cast<const ConvergenceError*>(&e) ? kExitNonConvergence : kExitInconsistent;
    outcome.summary["exit_code"] = outcome.exit_code;
  }
  StoredRun run{id, config.document, outcome.records, outcome.summary, log.str(), outcome.csv};
  store.save(run);
  std::cout << "run " << id << " stored in " << store.run_dir(id).string() << "\n" << summary_table(outcome.summary);
  return outcome.exit_code;
}

int command_export(const std::string& id, const std::string& format, const std::string& dest,
                   const std::string& out_dir) {
  const ResultsStore store(
      ResultsStore::resolve_root(out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir), std::nullopt));
  StoredRun run;
  try {
    run = store.load(id);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  }
  const fs::path target = dest.empty() ? store.run_dir(id) / "export" : fs::path(dest);
  fs::create_directories(target);
  auto write = [&](const std::string& name, const std::string& contents) {
    std::ofstream(target / name, std::ios::binary) << contents;
    std::cout << (target / name).string() << "\n";
  };
  if (format == "csv") {
    for (const auto& [name, contents] : run.csv) write(name, contents);
  } else {
    write("summary.json", run.summary.dump(2) + "\n");
  }
  return kExitSuccess;
}

int command_inequalities(double p, std::size_t samples, std::uint64_t seed) {
  MonotonicityReport r;
  try {
    r = monotonicity_check(p, samples, seed);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  std::printf("p = %g, %zu samples (%zu non-finite)\n", r.p, r.samples, r.non_finite);
  std::printf("%s ratio infimum:   %.12g\n", r.lower_form.c_str(), r.lower_infimum);
  std::printf("continuity ratio supremum: %.12g\n", r.upper_supremum);
  std::printf("max scale deviation:       %.3e\n", r.scale_deviation);
  const bool ok = r.lower_infimum > 0.0 && std::isfinite(r.upper_supremum) && r.non_finite == 0 &&
                  r.scale_deviation <= 1e-10;
  return ok ? kExitSuccess : kExitInconsistent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exterior reconstruction experiments for the weighted fractional p-Laplacian"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool force = false;
  std::size_t threads = 0;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_flag("--force", force, "Recompute even if the run is already stored");
  run->add_option("--threads", threads, "Worker threads for pair sums")->check(CLI::PositiveNumber);
  run->add_option("--output-dir", out_dir, "Results directory (overrides FRACDN_OUTPUT_DIR)");

  std::string run_id, format = "csv", dest;
  auto* exp = app.add_subcommand("export", "Export a stored run");
  exp->add_option("run-id", run_id, "Run id (config hash)")->required();
  exp->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--dest", dest, "Destination directory (default <run>/export)");
  exp->add_option("--output-dir", out_dir, "Results directory (overrides FRACDN_OUTPUT_DIR)");

  double p = 2.0;
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
  auto* ineq = app.add_subcommand("verify-inequalities", "Monte-Carlo check of the vector inequalities");
  ineq->add_option("--p", p, "Exponent p > 1")->required();
  ineq->add_option("--samples", samples, "Number of random pairs");
  ineq->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }
  try {
    if (*run) return command_run(config_path, force, threads, out_dir);
    if (*exp) return command_export(run_id, format, dest, out_dir);
    if (*ineq) return command_inequalities(p, samples, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
