#include "cv2x/core/units.hpp"

#include <cmath>
#include <stdexcept>

namespace cv2x {

PowerMw dbm_to_mw(PowerDbm p) { return PowerMw{std::pow(10.0, p.value / 10.0)}; }

PowerDbm mw_to_dbm(PowerMw p) {
  if (!(p.value > 0.0)) throw std::domain_error("mw_to_dbm: power must be positive");
  return PowerDbm{10.0 * std::log10(p.value)};
}

double distance(const Position& a, const Position& b, double lane_width_m) {
  const double dx = a.x - b.x;
  const double dy = (a.lane - b.lane) * lane_width_m;
  return std::hypot(dx, dy);
}

}  // namespace cv2x
