// greenlab <subcommand> [--config PATH] [--seed N] [--out DIR] [--map LABEL|PATH]
//
// Precedence: built-in defaults < config file < command-line flags.
// Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 unsupported map/method.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "greenlab/experiment.hpp"

namespace {

int exit_code(greenlab::ErrorKind kind) {
  switch (kind) {
    case greenlab::ErrorKind::config: return 2;
    case greenlab::ErrorKind::numeric: return 3;
    case greenlab::ErrorKind::unsupported: return 4;
  }
  return 3;
}

int report_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical diagnostics for the Green measure of endomorphisms of P^k"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, map;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Base seed (overrides the config)");
  app.add_option("--out", out, "Output directory (overrides the config)");
  app.add_option("--map", map, "Zoo label, map.json path or zoo entry directory (overrides the config)");
  app.add_flag("--quiet", quiet, "Suppress warnings on stderr");
  for (const char* name : {"sample", "exponents", "masses", "linearize", "dimension", "verdict", "validate-zoo"}) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("config", e.what(), 2);
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  greenlab::set_warnings_enabled(!quiet);
  try {
    greenlab::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = greenlab::load_config(config_path, cfg);
    if (seed) cfg.seed = *seed;
    if (out) cfg.output_dir = *out;
    if (map) cfg.map = *map;
    nlohmann::ordered_json summary = greenlab::run_subcommand(sub, cfg);
    summary["output_dir"] = cfg.output_dir;
    summary["config_hash"] = greenlab::config_hash(cfg);
    std::cout << summary.dump() << "\n";
    if (summary.contains("all_ok") && !summary["all_ok"].get<bool>()) return 3;
    return 0;
  } catch (const greenlab::Error& e) {
    const int code = exit_code(e.kind());
    const char* kind = code == 2 ? "config" : code == 4 ? "unsupported" : "numeric";
    return report_error(kind, e.what(), code);
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error("config", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("numeric", e.what(), 3);
  }
}
