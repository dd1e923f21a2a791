#pragma once

#include "cv2x/core/rng.hpp"
#include "cv2x/core/units.hpp"
#include "cv2x/sps/selection.hpp"

namespace cv2x::sps {

/// Semi-persistent reservation held by one UE.
struct Grant {
  SubframeIndex next_tx = 0;
  int subchannel = 0;
  int period_ms = 100;
  int slrrc = 0;  // transmissions remaining before the keep/reselect decision
};

enum class GrantDecision { keep, reselect };

struct TransmissionResult {
  GrantDecision decision = GrantDecision::keep;
  Grant grant;  // meaningful for keep
};

/// Fresh counter, uniform on [slrrc_min, slrrc_max].
int draw_slrrc(RngStream& rng, const SpsConfig& cfg);

/// Counter bookkeeping after one transmission on the grant. Throws
/// std::invalid_argument when called with an exhausted counter.
TransmissionResult on_transmission(const Grant& g, RngStream& rng, const SpsConfig& cfg);

}  // namespace cv2x::sps
