#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <string>
#include <vector>

#include "cv2x/core/units.hpp"

namespace cv2x::metrics {

enum class PdrAveraging { pair, pooled };

struct MetricsConfig {
  double bin_width_m = 25.0;
  double max_distance_m = 1000.0;
  double roi_radius_m = 100.0;
  PdrAveraging pdr_averaging = PdrAveraging::pair;

  void validate() const;
};

/// Ordered (transmitter, receiver) pair; `run` keeps pairs of merged runs apart.
struct PairKey {
  std::uint32_t run = 0;
  UeId tx = 0;
  UeId rx = 0;
  auto operator<=>(const PairKey&) const = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept;
};

struct PairBin {
  PairKey pair;
  int bin = 0;
  auto operator<=>(const PairBin&) const = default;
};

struct PairBinHash {
  std::size_t operator()(const PairBin& k) const noexcept;
};

struct BinCell {
  std::uint64_t tx = 0;
  std::uint64_t rx = 0;
  std::uint64_t bytes = 0;
};

/// Per (pair, distance bin) accumulators. Bins partition [0, max_m).
struct DistanceBins {
  double width_m = 25.0;
  double max_m = 1000.0;
  std::unordered_map<PairBin, BinCell, PairBinHash> cells;

  /// -1 for distances outside [0, max_m).
  int bin_of(double d_m) const;
  int bin_count() const;
};

struct Reception {
  SubframeIndex t = 0;
  double distance_m = 0.0;
};

struct PairHistory {
  std::vector<Reception> receptions;  // strictly increasing t
  std::uint64_t attempts = 0;
  std::uint64_t bytes = 0;
  double max_distance_m = 0.0;
};

struct PairLedger {
  std::unordered_map<PairKey, PairHistory, PairKeyHash> pairs;

  /// Keys in ascending order; all reports iterate in this order.
  std::vector<PairKey> sorted_keys() const;
};

/// Accumulated reception ledgers of one or more runs.
class MetricsStore {
 public:
  MetricsStore() = default;
  MetricsStore(const MetricsConfig& cfg, double observation_s);

  /// One transmission attempt from key.tx towards key.rx at time t.
  void record(const PairKey& key, SubframeIndex t, double distance_m, bool decoded, int bytes);

  /// Union of ledgers; order-independent. Throws on binning or
  /// observation-time mismatch.
  void merge(const MetricsStore& other);

  /// Copy with every pair key moved to run `run`, so runs merge side by side.
  MetricsStore relabeled(std::uint32_t run) const;

  const MetricsConfig& config() const { return cfg_; }
  double observation_s() const { return observation_s_; }
  const DistanceBins& bins() const { return bins_; }
  const PairLedger& ledger() const { return ledger_; }
  DistanceBins& bins() { return bins_; }
  PairLedger& ledger() { return ledger_; }

 private:
  MetricsConfig cfg_;
  double observation_s_ = 1.0;
  DistanceBins bins_;
  PairLedger ledger_;
};

struct BinValue {
  double lo_m = 0.0;
  double hi_m = 0.0;
  double value = 0.0;
  std::size_t count = 0;  // pairs (pdr, slt) or gaps (ipg)
};

/// Per-bin PDR; bins without transmissions are omitted.
std::vector<BinValue> pdr(const DistanceBins& bins, PdrAveraging averaging = PdrAveraging::pair);

struct EcdfPoint {
  double gap_ms = 0.0;
  double fraction = 0.0;
  std::size_t cumulative = 0;
};

struct IpgStats {
  std::vector<BinValue> mean_per_bin;  // ms
  std::vector<EcdfPoint> ecdf;
  double p80_ms = 0.0;  // NaN when there are no gaps
  std::size_t gaps = 0;
};

/// Gaps between successive receptions of each ordered pair, binned by the
/// distance at the later reception, plus the pooled ECDF.
IpgStats ipg_stats(const PairLedger& ledger, double bin_width_m, double max_distance_m);

/// Per-bin sidelink throughput in bytes/s, averaged over pairs.
std::vector<BinValue> slt(const DistanceBins& bins, double observation_s);

struct BlindReport {
  std::vector<PairKey> pairs;
  std::size_t blind_ues = 0;  // receivers blind to at least one neighbor
};

using RoiPredicate = std::function<bool(const PairKey&, const PairHistory&)>;

/// Pairs in the region of interest with zero decoded receptions.
BlindReport blind_nodes(const PairLedger& ledger, const RoiPredicate& in_roi);

/// ROI: every attempt of the pair happened within `radius_m`.
RoiPredicate within_radius(double radius_m);

struct MetricsReport {
  double bin_width_m = 25.0;
  std::vector<BinValue> pdr;
  std::vector<BinValue> slt;
  IpgStats ipg;
  BlindReport blind;
};

MetricsReport make_report(const MetricsStore& store);

struct GainRow {
  double lo_m = 0.0;
  double hi_m = 0.0;
  double pdr_gain_pp = 0.0;
  double slt_gain_bytes_per_s = 0.0;
};

/// DCC minus baseline for every bin present in both reports. Throws
/// std::invalid_argument when the bin widths differ.
std::vector<GainRow> gains(const MetricsReport& dcc, const MetricsReport& baseline);

/// Timeseries sample of the DCC control variables.
struct TimeSample {
  double t_s = 0.0;
  double mean_cbp_pct = 0.0;
  double mean_power_dbm = 0.0;
  double mean_itt_ms = 0.0;
};

// CSV writers; floating point printed with 6 significant digits.
std::string format6(double v);
std::string pdr_csv(const std::vector<BinValue>& rows);
std::string slt_csv(const std::vector<BinValue>& rows);
std::string ipg_csv(const IpgStats& stats);
std::string blind_csv(const BlindReport& report);
std::string timeseries_csv(const std::vector<TimeSample>& samples);
std::string gains_csv(const std::vector<GainRow>& rows);

}  // namespace cv2x::metrics
