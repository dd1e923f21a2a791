#include <CLI11.hpp>
#include <iostream>

#include "cv2x/cli/config.hpp"
#include "cv2x/cli/runner.hpp"
#include "cv2x/dcc/dcc.hpp"
#include "cv2x/mobility/mobility.hpp"

namespace {

using namespace cv2x;
using namespace cv2x::cli;

struct CommonOptions {
  std::string config;
  std::string scenario;
  std::string scheme;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* app, CommonOptions& o, bool with_presets) {
  app->add_option("-c,--config", o.config, "config file (INI)")->check(CLI::ExistingFile);
  if (with_presets) {
    app->add_option("--scenario", o.scenario, "scenario preset");
    app->add_option("--scheme", o.scheme, "DCC scheme preset");
    o.seed_opt = app->add_option("--seed", o.seed, "master seed");
  }
  app->add_option("--set", o.overrides, "override, section.key=value (repeatable)");
}

LoadRequest request(const CommonOptions& o) {
  LoadRequest r;
  if (!o.config.empty()) r.file = o.config;
  if (!o.scenario.empty()) r.scenario = o.scenario;
  if (!o.scheme.empty()) r.scheme = o.scheme;
  if (o.seed_opt && o.seed_opt->count()) r.seed = o.seed;
  r.overrides = o.overrides;
  return r;
}

void print_presets() {
  std::cout << "scenarios:\n";
  for (const auto& n : mobility::scenario_names()) {
    const auto p = *mobility::scenario_preset(n);
    std::cout << "  " << n << ": " << p.resolved_vehicle_count() << " vehicles, " << p.road_length_km << " km, "
              << p.speed_kmh << " km/h" << (p.wraparound ? ", ring" : "") << '\n';
  }
  std::cout << "schemes:\n";
  for (const auto& n : dcc::scheme_names()) {
    const auto s = *dcc::scheme_preset(n);
    std::cout << "  " << n;
    if (s.dcc.enabled) {
      std::cout << ": B=" << s.dcc.rate.density_coefficient << ", P=[" << s.dcc.range.p_min_dbm << ", "
                << s.dcc.range.p_max_dbm << "] dBm, U=[" << s.dcc.range.u_min_pct << ", " << s.dcc.range.u_max_pct
                << "]%";
      if (s.slrrc_range) std::cout << ", SLRRC=[" << s.slrrc_range->first << ", " << s.slrrc_range->second << "]";
    } else {
      std::cout << ": no DCC, ITT " << s.dcc.baseline_itt_ms << " ms, " << s.dcc.baseline_power_dbm << " dBm";
    }
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C-V2X Mode-4 sidelink simulator with distributed congestion control"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string run_out;
  bool write_log = false;
  auto* run_cmd = app.add_subcommand("run", "run one simulation");
  add_common(run_cmd, run_opts, true);
  run_cmd->add_option("-o,--out", run_out, "output directory (default: <root>/<scenario>__<scheme>__seed<k>)");
  run_cmd->add_flag("--write-log", write_log, "also write the raw event log");

  CommonOptions sweep_opts;
  std::vector<std::string> scenarios, schemes;
  std::vector<std::uint64_t> seeds;
  int seed_count = 0;
  int jobs = 1;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "run scenario x scheme x seed tuples and compute gains");
  add_common(sweep_cmd, sweep_opts, false);
  sweep_cmd->add_option("--scenarios", scenarios, "scenario presets")->delimiter(',')->required();
  sweep_cmd->add_option("--schemes", schemes, "scheme presets; baseline is added when missing")->delimiter(',')->required();
  auto* seeds_opt = sweep_cmd->add_option("--seeds", seeds, "seeds")->delimiter(',');
  sweep_cmd->add_option("--seed-count", seed_count, "use seeds 1..N")->excludes(seeds_opt);
  sweep_cmd->add_option("-j,--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("-o,--out", sweep_out, "output root");

  CommonOptions validate_opts;
  auto* validate_cmd = app.add_subcommand("validate", "check a config and print the resolved configuration");
  add_common(validate_cmd, validate_opts, true);

  app.add_subcommand("presets", "list scenario and scheme presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) {
      const auto cfg = load(request(run_opts));
      const auto dir = run_out.empty() ? output_root(std::nullopt) / run_dir_name(cfg) : std::filesystem::path(run_out);
      const auto a = run_to_dir(cfg, dir, write_log);
      std::cout << "wrote " << dir.string() << " (" << a.result.stats.generated << " packets, p80 IPG "
                << metrics::format6(a.report.ipg.p80_ms) << " ms)\n";
      return kOk;
    }
    if (*sweep_cmd) {
      SweepSpec spec;
      spec.scenarios = scenarios;
      spec.schemes = schemes;
      spec.seeds = seeds;
      for (int s = 1; s <= seed_count; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
      spec.jobs = jobs;
      spec.base = request(sweep_opts);
      return run_sweep(spec, sweep_out.empty() ? output_root(std::nullopt) : std::filesystem::path(sweep_out),
                       std::cerr);
    }
    if (*validate_cmd) {
      std::cout << manifest(load(request(validate_opts)));
      return kOk;
    }
    print_presets();
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error:\n" << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
