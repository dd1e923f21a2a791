#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "cv2x/core/units.hpp"

namespace cv2x::sps {

/// Per-slot resource-pool membership and own usage/reservation flags over a
/// contiguous run of subframes starting at `origin`.
class OccupancyTable {
 public:
  OccupancyTable(SubframeIndex origin, std::size_t length, int subchannels, bool full_pool = true);

  void set_pool(SubframeIndex j, int i, bool member);
  void set_used(SubframeIndex j, int i, bool used);
  bool in_pool(SubframeIndex j, int i) const { return pool_[index(j, i)] != 0; }
  bool used(SubframeIndex j, int i) const { return used_[index(j, i)] != 0; }

  SubframeIndex origin() const { return origin_; }
  SubframeIndex end() const { return origin_ + static_cast<SubframeIndex>(length_); }
  int subchannels() const { return subchannels_; }

 private:
  std::size_t index(SubframeIndex j, int i) const;

  SubframeIndex origin_;
  std::size_t length_;
  int subchannels_;
  std::vector<std::uint8_t> pool_;
  std::vector<std::uint8_t> used_;
};

/// Channel-occupancy ratio over the half-open window [tau1, tau2): share of
/// pool slots the UE used or reserved. Requires tau2 - tau1 == span and
/// n - tau1 > span / 2; throws std::invalid_argument otherwise, or when the
/// table does not cover the window or the window holds no pool slot.
double compute_cr(SubframeIndex n, const OccupancyTable& table, SubframeIndex tau1, SubframeIndex tau2,
                  SubframeIndex span = 1000);

/// Piecewise-linear inverse calibration: CBP ratio -> vehicle count.
class CalibrationTable {
 public:
  CalibrationTable() = default;
  explicit CalibrationTable(std::vector<std::pair<double, double>> points);

  /// Parses "cbp:vehicles, cbp:vehicles, ..."; throws std::invalid_argument.
  static CalibrationTable parse(std::string_view text);
  std::string to_string() const;

  double operator()(double cbp) const;
  bool empty() const { return points_.empty(); }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<double, double>> points_;
};

/// CR limit for a measured CBP (ratios in [0, 1]); 1 means no limit.
/// Throws std::domain_error when f_inv(cbp) is zero.
double cr_limit(double cbp, double cbp_limit, const std::function<double(double)>& f_inv);

}  // namespace cv2x::sps
