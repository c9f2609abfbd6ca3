// wgscatter <subcommand> [--config file] [--set key=value]... [--out path] [--jobs n]
//
// Exit status: 0 success, 1 bad configuration, 2 numerical failure,
// 3 unitarity deficit above 1e-8 in any emitted row.

#include "wgscatter/config.hpp"
#include "wgscatter/csv.hpp"
#include "wgscatter/experiments.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitInvariant = 3;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("wgscatter");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char *env = std::getenv("WGSCATTER_LOG")) {
    const std::string level(env);
    if (level == "error" || level == "warn" || level == "info" || level == "debug")
      spdlog::set_level(spdlog::level::from_str(level));
    else
      spdlog::warn("ignoring WGSCATTER_LOG='{}' (expected error, warn, info or debug)", level);
  }
}

std::string report_path(const wgscatter::ExperimentConfig &c) {
  if (!c.output.report.empty())
    return c.output.report;
  if (!c.output.path.empty())
    return c.output.path + ".crossings.json";
  return {};
}

} // namespace

int main(int argc, char **argv) {
  setup_logging();

  CLI::App app{"Coupled-channel scattering of a two-level atom through a laser region "
               "in a hard-wall waveguide"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  int jobs = -1;

  for (const char *name : {"coupling-scan", "converge", "levels", "scatter", "sweep-L",
                           "sweep-chi", "crossings"}) {
    auto *sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "TOML experiment file");
    sub->add_option("--set", overrides, "override a config key, e.g. laser.chi=0.5")
        ->take_all();
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--jobs", jobs, "worker threads (default: logical processors)")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const CLI::App *sub = app.get_subcommands().front();
  try {
    std::vector<std::string> all = overrides;
    if (!out_path.empty())
      all.push_back("output.path=\"" + out_path + "\"");
    if (jobs >= 0)
      all.push_back("output.jobs=" + std::to_string(jobs));
    const auto kind = wgscatter::parse_experiment_kind(sub->get_name());
    const auto config = wgscatter::load_config_file(kind, config_path, all);

    const auto result = wgscatter::run_experiment(config);
    wgscatter::write_text(config.output.path, result.text);
    if (!result.report.empty()) {
      const std::string path = report_path(config);
      if (!path.empty())
        wgscatter::write_text(path, result.report);
    }
    if (!result.unitarity_ok()) {
      spdlog::error("unitarity deficit {:.3e} exceeds {:.0e}", result.max_unitarity_deficit,
                    wgscatter::kMaxUnitarityDeficit);
      return kExitInvariant;
    }
    return kExitOk;
  } catch (const wgscatter::ConfigError &e) {
    spdlog::error("configuration error: {}", e.what());
    return kExitConfig;
  } catch (const wgscatter::NumericalError &e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  }
}
