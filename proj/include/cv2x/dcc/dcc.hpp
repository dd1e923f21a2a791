#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cv2x/channel/channel.hpp"
#include "cv2x/core/units.hpp"
#include "cv2x/sps/occupancy.hpp"
#include "cv2x/sps/sensing_window.hpp"

namespace cv2x::dcc {

/// Density-driven rate control.
struct RateControlConfig {
  double density_coefficient = 25.0;  // vehicles
  double itt_max_ms = 600.0;
  double smoothing = 0.5;
  double neighbor_radius_m = 100.0;
  double pte_threshold_m = 0.5;

  void validate() const;
};

/// CBP-driven power (range) control.
struct RangeControlConfig {
  double p_min_dbm = 10.0;
  double p_max_dbm = 23.0;
  double u_min_pct = 50.0;
  double u_max_pct = 80.0;
  double eta = 0.5;

  void validate() const;
};

struct CrLimitConfig {
  bool enabled = false;
  double cbp_limit_pct = 60.0;
  sps::CalibrationTable calibration{{{0.0, 0.0}, {1.0, 200.0}}};
};

struct DccConfig {
  bool enabled = true;
  RateControlConfig rate;
  RangeControlConfig range;
  int density_interval_ms = 1000;
  int power_interval_ms = 200;
  int cbp_window_ms = 100;
  double cbp_rssi_threshold_dbm = -94.0;
  bool pte_enabled = true;
  /// PTE-triggered packets wait for the own grant if it recurs within this
  /// many subframes; otherwise a one-shot selection is made.
  int pte_grant_wait_ms = 20;
  double baseline_itt_ms = 100.0;
  double baseline_power_dbm = 23.0;
  CrLimitConfig cr_limit;

  void validate() const;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct KinematicState {
  Vec2 position;
  Vec2 velocity;  // m/s
};

struct BroadcastState {
  Vec2 position;
  Vec2 velocity;
  SubframeIndex timestamp = 0;
};

struct DccState {
  double n_sta_smoothed = 0.0;
  bool density_seeded = false;
  double itt_ms = 100.0;
  double power_dbm = 23.0;
  std::optional<SubframeIndex> last_tx_time;
  BroadcastState last_broadcast;
  double cbp_pct = 0.0;
};

/// Channel busy percentage over the last `cbp_window` subframes before `n`:
/// share of sensed subchannel slots whose S-RSSI exceeds the threshold.
/// Unsensed and absent subframes are excluded. nullopt when no slot was sensed.
std::optional<double> measure_cbp(const sps::SensingWindow& w, SubframeIndex n, double rssi_threshold_dbm,
                                  int cbp_window);

/// Other vehicles within `radius_m` of `all[host]`, boundary inclusive.
int count_neighbors(std::size_t host, std::span<const Position> all, double radius_m,
                    const channel::DistanceFn& dist = {});

/// Single-step memory smoothing; factor 1/2 gives (n_new + n_prev) / 2.
double smooth_density(double n_new, double n_prev_smoothed, double factor = 0.5);

/// Inter-transmit time in ms from the smoothed neighbor count.
double compute_itt(double n_sta_smoothed, const RateControlConfig& cfg);

/// Target power g(CBP) of the range-control loop.
double power_target(double cbp_pct, const RangeControlConfig& cfg);

/// One step of P_{k+1} = P_k + eta * (g(CBP) - P_k).
double update_power(double p_k_dbm, double cbp_pct, const RangeControlConfig& cfg);

/// Distance between the extrapolated last broadcast and the actual position.
double update_pte(const KinematicState& actual, const BroadcastState& last, SubframeIndex now);

bool should_transmit(const DccState& state, double pte_m, SubframeIndex now, const RateControlConfig& cfg);

/// Named DCC scheme: the standard DCC, the seven test schemes, or baseline.
struct SchemePreset {
  std::string name;
  DccConfig dcc;
  std::optional<std::pair<int, int>> slrrc_range;
  std::optional<double> p_resel;
};

std::optional<SchemePreset> scheme_preset(std::string_view name);
std::vector<std::string> scheme_names();

}  // namespace cv2x::dcc
