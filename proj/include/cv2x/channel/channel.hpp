#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cv2x/core/units.hpp"

namespace cv2x::channel {

enum class Fading { none, nakagami };
enum class ShadowingMode { iid, per_pair };

/// Log-distance propagation with an optional second slope beyond a
/// breakpoint, log-normal shadowing and optional Nakagami-m fading.
struct ChannelModel {
  double reference_distance_m = 1.0;
  double reference_loss_db = 47.86;  // free space at 1 m, 5.86 GHz
  double pathloss_exponent = 2.0;
  double breakpoint_m = 100.0;  // <= 0 disables the far slope
  double pathloss_exponent_far = 3.8;
  double shadowing_sigma_db = 3.0;
  ShadowingMode shadowing_mode = ShadowingMode::iid;
  Fading fading = Fading::none;
  double nakagami_m = 1.0;
  double noise_floor_dbm = -98.0;
  double sensitivity_dbm = -95.0;
  double sinr_threshold_db = 2.5;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  static ChannelModel single_slope(double d0, double pl0, double exponent);
};

/// Path loss in dB; distances below d0 clamp to the reference loss.
double pathloss(double d_m, const ChannelModel& m);

PowerDbm received_power(PowerDbm tx, double d_m, double shadow_db, double fade_db,
                        const ChannelModel& m);

enum class RxStatus : std::uint8_t { decoded = 0, collided = 1, below_sensitivity = 2, half_duplex_blocked = 3 };

const char* to_string(RxStatus s);

struct Transmission {
  UeId ue = 0;
  Csr csr;
  PowerDbm power{23.0};
  Position position;
  /// Reservation period announced alongside the packet; 0 = no reservation.
  int reservation_period_ms = 0;
};

struct Receiver {
  UeId ue = 0;
  Position position;
};

struct RxOutcome {
  std::uint32_t tx_index = 0;  // into the transmission list
  std::uint32_t rx_index = 0;  // into the receiver list
  RxStatus status = RxStatus::below_sensitivity;
  double signal_dbm = 0.0;
  double sinr_db = 0.0;
  double distance_m = 0.0;
};

/// A decoded reservation as seen by one receiver.
struct DecodedReservation {
  int subchannel = 0;
  UeId source = 0;
  double rsrp_dbm = 0.0;
  int period_ms = 0;
};

/// Everything one receiver measured in one subframe.
struct RxMeasurement {
  SubframeIndex subframe = 0;
  bool sensed = true;  // false when the receiver transmitted (half-duplex)
  std::vector<double> srssi_dbm;  // per subchannel
  std::vector<DecodedReservation> decoded;
};

struct LinkDraw {
  double shadow_db = 0.0;
  double fade_db = 0.0;
};

/// Supplies per-link shadowing and fading; called in receiver-major,
/// transmission order for every non-blocked (receiver, transmission) pair.
using LinkDrawFn = std::function<LinkDraw(std::size_t tx_index, std::size_t rx_index)>;
using DistanceFn = std::function<double(const Position&, const Position&)>;

/// Result of resolving a subframe, laid out for reuse across calls.
struct SubframeResult {
  SubframeIndex subframe = 0;
  int subchannels = 0;
  std::vector<RxOutcome> outcomes;            // receiver-major
  std::vector<std::size_t> outcome_begin;     // per receiver, size = receivers + 1
  std::vector<double> srssi_dbm;              // receivers x subchannels
  std::vector<std::uint8_t> sensed;           // per receiver

  std::span<const RxOutcome> outcomes_of(std::size_t rx_index) const {
    return std::span<const RxOutcome>(outcomes).subspan(
        outcome_begin[rx_index], outcome_begin[rx_index + 1] - outcome_begin[rx_index]);
  }
  RxMeasurement measurement(std::size_t rx_index, std::span<const Transmission> txs) const;
};

/// Resolves all transmissions of one subframe at every receiver. Throws
/// std::invalid_argument if the transmissions span more than one subframe
/// or use a subchannel outside [0, subchannels).
void resolve_subframe(std::span<const Transmission> transmissions, std::span<const Receiver> receivers,
                      int subchannels, const ChannelModel& model, const LinkDrawFn& draw,
                      const DistanceFn& dist, SubframeResult& out);

SubframeResult resolve_subframe(std::span<const Transmission> transmissions,
                                std::span<const Receiver> receivers, int subchannels,
                                const ChannelModel& model, const LinkDrawFn& draw = {},
                                const DistanceFn& dist = {});

}  // namespace cv2x::channel
