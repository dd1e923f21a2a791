#include "cv2x/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#ifndef CV2X_VERSION
#define CV2X_VERSION "dev"
#endif

namespace cv2x::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string version() { return CV2X_VERSION; }

std::string manifest(const engine::RunConfig& cfg) {
  return "; cv2x-sim " + version() + " resolved configuration\n" + dump(cfg);
}

std::string summary_csv(const engine::RunConfig& cfg, const engine::RunResult& r,
                        const metrics::MetricsReport& report) {
  using metrics::format6;
  std::uint64_t measured = 0, attempts = 0, decoded = 0;
  for (const auto& t : r.log.tx) measured += t.measured ? 1 : 0;
  for (const auto& [k, h] : r.store.ledger().pairs) {
    attempts += h.attempts;
    decoded += h.receptions.size();
  }
  double cbp = 0.0, power = 0.0, itt = 0.0;
  std::size_t samples = 0;
  for (const auto& s : r.timeseries) {
    if (s.t_s < cfg.warmup_s) continue;
    cbp += s.mean_cbp_pct;
    power += s.mean_power_dbm;
    itt += s.mean_itt_ms;
    ++samples;
  }
  const double ns = samples ? static_cast<double>(samples) : 1.0;

  std::ostringstream os;
  os << "metric,value\n";
  auto row = [&](const char* name, const std::string& v) { os << name << ',' << v << '\n'; };
  row("vehicles", std::to_string(cfg.scenario.resolved_vehicle_count()));
  row("observation_s", format6(r.observation_s));
  row("tx_events", std::to_string(r.log.tx.size()));
  row("measured_tx_events", std::to_string(measured));
  row("rx_attempts", std::to_string(attempts));
  row("rx_decoded", std::to_string(decoded));
  row("rx_collided", std::to_string(r.stats.collided));
  row("pdr_pooled", format6(attempts ? static_cast<double>(decoded) / static_cast<double>(attempts) : 0.0));
  row("blind_pairs", std::to_string(report.blind.pairs.size()));
  row("blind_ues", std::to_string(report.blind.blind_ues));
  row("ipg_gaps", std::to_string(report.ipg.gaps));
  row("ipg_p80_ms", format6(report.ipg.p80_ms));
  row("mean_cbp_pct", format6(cbp / ns));
  row("mean_power_dbm", format6(power / ns));
  row("mean_itt_ms", format6(itt / ns));
  row("packets_generated", std::to_string(r.stats.generated));
  row("packets_replaced", std::to_string(r.stats.replaced));
  row("selections", std::to_string(r.stats.selections));
  row("oneshot_selections", std::to_string(r.stats.oneshot_selections));
  row("threshold_escalations", std::to_string(r.stats.escalations));
  row("pte_triggers", std::to_string(r.stats.pte_triggers));
  row("skipped_occurrences", std::to_string(r.stats.skipped_occurrences));
  row("cr_drops", std::to_string(r.stats.cr_drops));
  row("mean_queue_delay_ms", format6(r.stats.mean_queue_delay_ms));
  row("event_log_digest", hex64(r.log.digest()));
  return os.str();
}

std::string run_dir_name(const engine::RunConfig& cfg) {
  return cfg.scenario.name + "__" + cfg.scheme + "__seed" + std::to_string(cfg.seed);
}

fs::path output_root(const std::optional<std::string>& explicit_dir) {
  if (explicit_dir) return *explicit_dir;
  if (const char* env = std::getenv("CV2X_OUT_DIR"); env && *env) return env;
  return "out";
}

RunArtifacts run_to_dir(const engine::RunConfig& cfg, const fs::path& out_dir, bool write_log, bool keep_log) {
  fs::create_directories(out_dir);
  RunArtifacts a;
  a.result = engine::run(cfg);
  a.report = metrics::make_report(a.result.store);
  write_file(out_dir / "manifest.ini", manifest(cfg));
  write_file(out_dir / "pdr_vs_distance.csv", metrics::pdr_csv(a.report.pdr));
  write_file(out_dir / "slt_vs_distance.csv", metrics::slt_csv(a.report.slt));
  write_file(out_dir / "ipg.csv", metrics::ipg_csv(a.report.ipg));
  write_file(out_dir / "blind_nodes.csv", metrics::blind_csv(a.report.blind));
  write_file(out_dir / "timeseries.csv", metrics::timeseries_csv(a.result.timeseries));
  write_file(out_dir / "summary.csv", summary_csv(cfg, a.result, a.report));
  if (write_log) {
    write_file(out_dir / "tx_events.csv", a.result.log.tx_csv());
    write_file(out_dir / "rx_outcomes.csv", a.result.log.rx_csv());
  }
  if (!keep_log) a.result.log = {};
  return a;
}

std::vector<SweepTuple> expand(const SweepSpec& spec) {
  if (spec.scenarios.empty() || spec.schemes.empty() || spec.seeds.empty())
    throw ConfigError("sweep: scenarios, schemes and seeds must all be non-empty");
  std::set<SweepTuple> seen;
  std::vector<SweepTuple> out;
  for (const auto& sc : spec.scenarios) {
    std::vector<std::string> schemes = spec.schemes;
    if (std::find(schemes.begin(), schemes.end(), "baseline") == schemes.end()) schemes.insert(schemes.begin(), "baseline");
    for (const auto& sh : schemes) {
      for (const auto seed : spec.seeds) {
        SweepTuple t{sc, sh, seed};
        if (!seen.insert(t).second)
          throw ConfigError("sweep: duplicate tuple " + sc + "/" + sh + "/seed " + std::to_string(seed));
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

int run_sweep(const SweepSpec& spec, const fs::path& out_root, std::ostream& log) {
  std::vector<SweepTuple> tuples;
  std::vector<engine::RunConfig> configs;
  try {
    tuples = expand(spec);
    for (const auto& t : tuples) {
      LoadRequest req = spec.base;
      req.scenario = t.scenario;
      req.scheme = t.scheme;
      req.seed = t.seed;
      configs.push_back(load(req));
    }
  } catch (const ConfigError& e) {
    log << "config error:\n" << e.what() << '\n';
    return kConfigError;
  }

  std::vector<std::optional<metrics::MetricsStore>> stores(tuples.size());
  std::vector<std::string> failures(tuples.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tuples.size(); i = next++) {
      try {
        auto a = run_to_dir(configs[i], out_root / "runs" / run_dir_name(configs[i]));
        stores[i] = std::move(a.result.store);
        std::lock_guard lock(log_mutex);
        log << "done " << run_dir_name(configs[i]) << '\n';
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(tuples.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t failed = 0;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    if (failures[i].empty()) continue;
    ++failed;
    log << "FAILED " << run_dir_name(configs[i]) << ": " << failures[i] << '\n';
  }
  if (failed) {
    log << failed << " of " << tuples.size() << " tuples failed\n";
    return kRuntimeError;
  }

  std::map<std::pair<std::string, std::uint64_t>, std::size_t> baseline;
  for (std::size_t i = 0; i < tuples.size(); ++i)
    if (tuples[i].scheme == "baseline") baseline[{tuples[i].scenario, tuples[i].seed}] = i;

  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < tuples.size(); ++i)
    if (tuples[i].scheme != "baseline") groups[{tuples[i].scenario, tuples[i].scheme}].push_back(i);

  try {
    for (const auto& [key, members] : groups) {
      std::ostringstream os;
      os << "seed,bin_lo,bin_hi,pdr_gain_pp,slt_gain_bytes_per_s\n";
      std::optional<metrics::MetricsStore> pooled_dcc, pooled_base;
      std::uint32_t run = 0;
      for (const auto i : members) {
        const auto b = baseline.at({tuples[i].scenario, tuples[i].seed});
        const auto rows = metrics::gains(metrics::make_report(*stores[i]), metrics::make_report(*stores[b]));
        const std::string csv = metrics::gains_csv(rows);
        std::istringstream lines(csv);
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line)) os << tuples[i].seed << ',' << line << '\n';
        auto d = stores[i]->relabeled(run);
        auto bl = stores[b]->relabeled(run);
        ++run;
        if (!pooled_dcc) {
          pooled_dcc = std::move(d);
          pooled_base = std::move(bl);
        } else {
          pooled_dcc->merge(d);
          pooled_base->merge(bl);
        }
      }
      const auto rows = metrics::gains(metrics::make_report(*pooled_dcc), metrics::make_report(*pooled_base));
      std::istringstream lines(metrics::gains_csv(rows));
      std::string line;
      std::getline(lines, line);
      while (std::getline(lines, line)) os << "all," << line << '\n';
      write_file(out_root / ("gains_" + key.first + "_" + key.second + ".csv"), os.str());
    }
  } catch (const std::exception& e) {
    log << "gains failed: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace cv2x::cli
