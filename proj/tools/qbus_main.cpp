// qbus <subcommand> <config-path> [--output-dir DIR] [--seed N] [--threads N]
//
// Exit codes: 0 success, 2 unreadable/malformed configuration or bad
// arguments, 3 validation failure, 4 study failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbus/config.hpp"
#include "qbus/studies.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitStudy = 4;

struct Arguments {
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-bus data-qubit coupler studies"};
  app.require_subcommand(1);
  Arguments args;
  for (const auto& name : qbus::study_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("config", args.config_path, "YAML configuration file")->required();
    sub->add_option("--output-dir", args.output_dir, "directory for CSV output");
    sub->add_option("--seed", args.seed, "random seed (overrides the configuration)");
    sub->add_option("--threads", args.threads, "worker threads");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string study = app.get_subcommands().front()->get_name();

  qbus::RunConfig cfg;
  try {
    cfg = qbus::load_config(args.config_path);
  } catch (const qbus::ConfigError& e) {
    std::cerr << "qbus: configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (args.output_dir) cfg.output_dir = *args.output_dir;
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;

  try {
    qbus::validate_config(cfg, study);
  } catch (const qbus::ValidationError& e) {
    std::cerr << "qbus: validation failed: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    for (const auto& path : qbus::run_study(study, cfg)) std::cout << path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "qbus: " << study << " failed: " << e.what() << "\n";
    return kExitStudy;
  }
  return 0;
}
