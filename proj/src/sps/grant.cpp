#include "cv2x/sps/grant.hpp"

#include <stdexcept>

namespace cv2x::sps {

int draw_slrrc(RngStream& rng, const SpsConfig& cfg) {
  return static_cast<int>(rng.uniform_int(cfg.slrrc_min, cfg.slrrc_max));
}

TransmissionResult on_transmission(const Grant& g, RngStream& rng, const SpsConfig& cfg) {
  if (g.slrrc < 1) throw std::invalid_argument("on_transmission: reselection counter already exhausted");
  TransmissionResult out;
  out.grant = g;
  out.grant.slrrc = g.slrrc - 1;
  if (out.grant.slrrc > 0) return out;
  if (rng.bernoulli(cfg.p_resel)) {
    out.decision = GrantDecision::reselect;
    return out;
  }
  out.grant.slrrc = draw_slrrc(rng, cfg);
  return out;
}

}  // namespace cv2x::sps
