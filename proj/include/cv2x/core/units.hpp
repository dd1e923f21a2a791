#pragma once

#include <compare>
#include <cstdint>

namespace cv2x {

/// 1 ms ticks since simulation start.
using SubframeIndex = std::int64_t;

using UeId = std::uint32_t;

struct PowerMw {
  double value = 0.0;
  auto operator<=>(const PowerMw&) const = default;
};

struct PowerDbm {
  double value = 0.0;
  auto operator<=>(const PowerDbm&) const = default;
};

PowerMw dbm_to_mw(PowerDbm p);

/// Throws std::domain_error for non-positive power.
PowerDbm mw_to_dbm(PowerMw p);

/// Candidate single-subframe resource: one subframe by one subchannel.
struct Csr {
  SubframeIndex subframe = 0;
  int subchannel = 0;
  auto operator<=>(const Csr&) const = default;
};

inline constexpr double kDefaultLaneWidthM = 4.0;

/// Position on a straight multi-lane road; y is derived from the lane index.
struct Position {
  double x = 0.0;
  int lane = 0;
  auto operator<=>(const Position&) const = default;
};

/// Euclidean distance including the lateral lane offset.
double distance(const Position& a, const Position& b, double lane_width_m = kDefaultLaneWidthM);

}  // namespace cv2x
