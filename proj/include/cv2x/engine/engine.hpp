#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cv2x/channel/channel.hpp"
#include "cv2x/core/units.hpp"
#include "cv2x/dcc/dcc.hpp"
#include "cv2x/metrics/metrics.hpp"
#include "cv2x/mobility/mobility.hpp"
#include "cv2x/sps/selection.hpp"

namespace cv2x::engine {

/// Which receptions the log keeps. `measured` stores outcomes only for
/// post-warmup transmissions from inside the measurement region.
enum class LogScope { measured, all };

struct RunConfig {
  double duration_s = 120.0;
  double warmup_s = 10.0;
  int subchannels = 2;
  int payload_bytes = 190;
  int mcs_index = 5;
  std::uint64_t seed = 1;
  int mobility_tick_ms = 100;
  int timeseries_interval_ms = 100;
  std::string scheme = "dcc-std";
  mobility::ScenarioPreset scenario;
  dcc::DccConfig dcc;
  sps::SpsConfig sps;
  channel::ChannelModel channel;
  metrics::MetricsConfig metrics;
  LogScope log_scope = LogScope::measured;

  /// Every violated invariant, empty when valid.
  std::vector<std::string> violations() const;
  /// Throws std::invalid_argument listing all violations.
  void validate() const;

  SubframeIndex total_subframes() const;
  SubframeIndex warmup_subframes() const;
};

struct TxEvent {
  SubframeIndex subframe = 0;
  SubframeIndex generated = 0;  // packet generation time; subframe - generated is the queueing delay
  UeId ue = 0;
  int subchannel = 0;
  double power_dbm = 0.0;
  Position position;
  int reservation_period_ms = 0;
  int bytes = 0;
  bool measured = false;  // post-warmup and inside the measurement region
  bool pte_triggered = false;
};

struct RxRecord {
  std::uint32_t tx = 0;  // index into EventLog::tx
  UeId receiver = 0;
  float distance_m = 0.0f;
  channel::RxStatus status = channel::RxStatus::below_sensitivity;
};

struct EventLog {
  std::vector<TxEvent> tx;
  std::vector<RxRecord> rx;

  /// FNV-1a over every field of every record, in order.
  std::uint64_t digest() const;
  std::string tx_csv() const;
  std::string rx_csv() const;
};

struct RunStats {
  std::uint64_t generated = 0;
  std::uint64_t replaced = 0;  // pending packets overwritten by a newer one
  std::uint64_t selections = 0;
  std::uint64_t oneshot_selections = 0;
  std::uint64_t escalations = 0;
  std::uint64_t pte_triggers = 0;
  std::uint64_t skipped_occurrences = 0;
  std::uint64_t cr_drops = 0;
  std::uint64_t collided = 0;  // measured transmissions only
  double mean_queue_delay_ms = 0.0;
};

struct RunResult {
  EventLog log;
  metrics::MetricsStore store;
  std::vector<metrics::TimeSample> timeseries;
  RunStats stats;
  double observation_s = 0.0;
};

/// Deterministic per-subframe simulation. Throws std::invalid_argument for
/// an invalid config.
RunResult run(const RunConfig& cfg);

/// Builds the metrics store of a run from its log alone.
metrics::MetricsStore build_store(const EventLog& log, const RunConfig& cfg);

}  // namespace cv2x::engine
