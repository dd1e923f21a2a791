#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "cv2x/channel/channel.hpp"
#include "cv2x/core/units.hpp"

namespace cv2x::sps {

enum class SlotState : std::uint8_t { absent = 0, sensed = 1, unsensed = 2 };

/// A decoded reservation stored in the sensing window.
struct StoredReservation {
  SubframeIndex subframe = 0;
  int subchannel = 0;
  UeId source = 0;
  double rsrp_dbm = 0.0;
  int period_ms = 0;
};

/// Trailing record of what one UE heard: per subframe and subchannel
/// S-RSSI, plus every decoded reservation, over the last `span` subframes.
///
/// Subframes during which the owner transmitted are stored as unsensed and
/// carry no S-RSSI. Subframes never recorded (gaps, or before the window
/// filled) are absent.
class SensingWindow {
 public:
  SensingWindow(int span = 1000, int subchannels = 2);

  /// Stores a sensed subframe. `n` must not be older than the newest stored
  /// subframe; an equal `n` replaces that record. Throws std::invalid_argument.
  void record(SubframeIndex n, std::span<const double> srssi_dbm,
              std::span<const channel::DecodedReservation> decoded);
  void record_unsensed(SubframeIndex n);
  void record(const channel::RxMeasurement& m);

  int span() const { return span_; }
  int subchannels() const { return subchannels_; }
  std::optional<SubframeIndex> newest() const { return newest_; }

  /// Number of stored (sensed or unsensed) subframes inside the window.
  std::size_t size() const;

  SlotState state(SubframeIndex m) const;
  bool covers(SubframeIndex m) const;

  /// S-RSSI of a sensed slot; undefined for other states.
  double srssi_dbm(SubframeIndex m, int subchannel) const {
    return srssi_[row(m) * static_cast<std::size_t>(subchannels_) + static_cast<std::size_t>(subchannel)];
  }

  const std::deque<StoredReservation>& reservations() const { return reservations_; }

 private:
  std::size_t row(SubframeIndex m) const { return static_cast<std::size_t>(m % span_); }
  void admit(SubframeIndex n);

  int span_;
  int subchannels_;
  std::optional<SubframeIndex> newest_;
  std::vector<SubframeIndex> tags_;
  std::vector<SlotState> states_;
  std::vector<double> srssi_;
  std::deque<StoredReservation> reservations_;
};

}  // namespace cv2x::sps
