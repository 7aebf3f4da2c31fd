#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "exciplex/cli/config.hpp"
#include "exciplex/cli/scenarios.hpp"
#include "exciplex/errors.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace exciplex;
  CLI::App app{"Collision-assisted laser cooling of exciplex gas mixtures: scenario runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cli::library_version());

  auto* list = app.add_subcommand("list", "list the available scenarios");
  auto* run = app.add_subcommand("run", "run the scenario described by a config file");
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::vector<std::string> overrides;
  run->add_option("config", config_path, "config file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "random seed");
  auto* threads_opt = run->add_option("--threads", threads, "worker threads (0 = all cores)");
  run->add_option("--override", overrides, "section.key=value, repeatable")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (*list) {
    for (const auto& s : cli::list_scenarios()) std::printf("%-16s %s\n", s.name.c_str(), s.description.c_str());
    return 0;
  }

  try {
    cli::RunConfig cfg = cli::load_config(config_path);
    for (const auto& o : overrides) cli::apply_override(cfg, o);
    if (*out_opt) cfg.output_dir = out_dir;
    if (*seed_opt) cfg.seed = seed;
    if (*threads_opt) cfg.threads = threads;
    const auto manifest = cli::run_scenario(cfg);
    for (const auto& w : manifest.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("%s: %zu files written to %s (%.1f s)\n", manifest.scenario.c_str(),
                manifest.files.size(), cfg.output_dir.c_str(), manifest.wall_clock_seconds);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical error in %s: %s\n", e.module().c_str(), e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
