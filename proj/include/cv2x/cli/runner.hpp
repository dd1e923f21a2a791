#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cv2x/cli/config.hpp"
#include "cv2x/engine/engine.hpp"
#include "cv2x/metrics/metrics.hpp"

namespace cv2x::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeError = 3 };

std::string version();

/// Resolved config prefixed with a version comment; loadable as a config file.
std::string manifest(const engine::RunConfig& cfg);

std::string summary_csv(const engine::RunConfig& cfg, const engine::RunResult& result,
                        const metrics::MetricsReport& report);

/// Runs one simulation and writes its CSVs and manifest into `out_dir`.
/// The returned result has its event log cleared unless `keep_log` is set.
struct RunArtifacts {
  engine::RunResult result;
  metrics::MetricsReport report;
};
RunArtifacts run_to_dir(const engine::RunConfig& cfg, const std::filesystem::path& out_dir, bool write_log = false,
                        bool keep_log = false);

/// "<scenario>__<scheme>__seed<k>"
std::string run_dir_name(const engine::RunConfig& cfg);

/// Output root: explicit value, else $CV2X_OUT_DIR, else "out".
std::filesystem::path output_root(const std::optional<std::string>& explicit_dir);

struct SweepTuple {
  std::string scenario;
  std::string scheme;
  std::uint64_t seed = 0;
  auto operator<=>(const SweepTuple&) const = default;
};

struct SweepSpec {
  std::vector<std::string> scenarios;
  std::vector<std::string> schemes;
  std::vector<std::uint64_t> seeds;
  int jobs = 1;
  LoadRequest base;  // shared config file and overrides
};

/// Cartesian product in (scenario, scheme, seed) order. A baseline tuple is
/// added for every (scenario, seed) that lacks one. Throws ConfigError for
/// an empty or duplicated spec.
std::vector<SweepTuple> expand(const SweepSpec& spec);

/// Runs every tuple, then writes gains_<scenario>_<scheme>.csv per non-baseline
/// (scenario, scheme) under `out_root`. Returns the process exit code.
int run_sweep(const SweepSpec& spec, const std::filesystem::path& out_root, std::ostream& log);

}  // namespace cv2x::cli
