#include "fracdn/store.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fracdn/errors.hpp"

namespace fracdn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

fs::path ResultsStore::resolve_root(const std::optional<std::string>& explicit_dir,
                                    const std::optional<std::string>& config_dir) {
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  if (config_dir && !config_dir->empty()) return *config_dir;
  return "fracdn-results";
}

std::string ResultsStore::run_id(const json& config) {
  json canonical = config;
  if (canonical.is_object()) canonical.erase("output_dir");
  const std::string text = canonical.dump();
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

bool ResultsStore::contains(const std::string& id) const {
  return fs::exists(run_dir(id) / "records.json");
}

std::vector<std::string> ResultsStore::list() const {
  std::vector<std::string> out;
  const fs::path runs = root_ / "runs";
  if (!fs::exists(runs)) return out;
  for (const auto& entry : fs::directory_iterator(runs)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_directory() && name.front() != '.' && contains(name)) out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ResultsStore::save(const StoredRun& run) const {
  const fs::path final_dir = run_dir(run.id);
  const fs::path tmp = root_ / "runs" / ("." + run.id + ".tmp");
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  write_file(tmp / "config.json", run.config.dump(2) + "\n");
  write_file(tmp / "records.json", run.records.dump(2) + "\n");
  write_file(tmp / "summary.json", run.summary.dump(2) + "\n");
  write_file(tmp / "run.log", run.log);
  for (const auto& [name, contents] : run.csv) write_file(tmp / name, contents);
  fs::remove_all(final_dir);
  fs::rename(tmp, final_dir);
}

StoredRun ResultsStore::load(const std::string& id) const {
  if (!contains(id)) throw Error("unknown run id " + id + " in " + root_.string());
  const fs::path dir = run_dir(id);
  StoredRun run;
  run.id = id;
  try {
    run.config = json::parse(read_file(dir / "config.json"));
    run.records = json::parse(read_file(dir / "records.json"));
    run.summary = json::parse(read_file(dir / "summary.json"));
  } catch (const json::parse_error& e) {
    throw Error("corrupt run " + id + ": " + e.what());
  }
  if (fs::exists(dir / "run.log")) run.log = read_file(dir / "run.log");
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") run.csv[entry.path().filename().string()] = read_file(entry.path());
  }
  return run;
}

}  // namespace fracdn
