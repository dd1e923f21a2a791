#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cv2x/core/rng.hpp"
#include "cv2x/core/units.hpp"
#include "cv2x/sps/sensing_window.hpp"

namespace cv2x::sps {

enum class RssiAveraging { linear, db };
enum class UnsensedPolicy { exclude, silent };
enum class TieBreak { random, index };

struct SpsConfig {
  int t1 = 1;
  int t2 = 100;
  double th_sps_dbm = -85.0;
  int slrrc_min = 5;
  int slrrc_max = 15;
  /// Probability of CHANGING the reservation when the counter expires.
  double p_resel = 0.2;
  int sensing_window = 1000;
  double keep_fraction = 0.2;
  double escalation_step_db = 3.0;
  RssiAveraging rssi_averaging = RssiAveraging::linear;
  UnsensedPolicy unsensed_policy = UnsensedPolicy::exclude;
  /// Reservation periods assumed for subframes the UE could not sense.
  std::vector<int> unsensed_periods_ms{100};
  /// Step used to project a candidate onto its past occurrences for S-RSSI ranking.
  int rssi_projection_period_ms = 100;
  TieBreak tie_break = TieBreak::random;

  void validate() const;
};

/// Number of candidates kept after ranking: ceil(fraction * initial).
std::size_t keep_count(std::size_t initial, double fraction);

struct CandidateSet {
  std::vector<Csr> kept;  // ascending average S-RSSI
  std::size_t initial_size = 0;
  std::size_t survivors = 0;
  double threshold_dbm = 0.0;
  int escalations = 0;
  bool unsensed_released = false;
};

/// Steps 1-4 of sensing-based selection for a packet arriving at `n`:
/// candidate set in [n+T1, n+T2], exemption of candidates predicted busy by
/// decoded reservations above the working threshold (and of candidates
/// projected from unsensed subframes), threshold escalation until enough
/// survive, then S-RSSI ranking.
///
/// `tie_rank`, if non-empty, holds one key per candidate in subframe-major
/// order and breaks ties in average S-RSSI; otherwise ties break by
/// (subframe, subchannel). Only window content older than `n` is read.
CandidateSet candidate_set(const SensingWindow& w, SubframeIndex n, const SpsConfig& cfg,
                           std::span<const std::uint32_t> tie_rank = {});

/// Full selection: ranks with random tie-breaking (unless configured
/// otherwise) and returns one kept candidate uniformly at random.
Csr select_resource(const SensingWindow& w, SubframeIndex n, const SpsConfig& cfg, RngStream& rng,
                    CandidateSet* trace = nullptr);

}  // namespace cv2x::sps
