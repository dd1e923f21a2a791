#include "cv2x/dcc/dcc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cv2x::dcc {

void RateControlConfig::validate() const {
  if (!(density_coefficient > 0.0)) throw std::invalid_argument("dcc: density coefficient must be > 0");
  if (!(itt_max_ms >= 100.0)) throw std::invalid_argument("dcc: itt_max must be >= 100 ms");
  if (!(smoothing > 0.0 && smoothing <= 1.0)) throw std::invalid_argument("dcc: smoothing must be in (0, 1]");
  if (!(neighbor_radius_m > 0.0)) throw std::invalid_argument("dcc: neighbor radius must be > 0");
  if (!(pte_threshold_m > 0.0)) throw std::invalid_argument("dcc: PTE threshold must be > 0");
}

void RangeControlConfig::validate() const {
  if (!(p_min_dbm <= p_max_dbm)) throw std::invalid_argument("dcc: p_min must not exceed p_max");
  if (!(u_min_pct < u_max_pct)) throw std::invalid_argument("dcc: u_min must be below u_max");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("dcc: eta must be in (0, 1]");
}

void DccConfig::validate() const {
  rate.validate();
  range.validate();
  if (density_interval_ms <= 0 || power_interval_ms <= 0 || cbp_window_ms <= 0)
    throw std::invalid_argument("dcc: intervals must be positive");
  if (pte_grant_wait_ms < 0) throw std::invalid_argument("dcc: PTE grant wait must be >= 0");
  if (!(baseline_itt_ms >= 1.0)) throw std::invalid_argument("dcc: baseline ITT must be >= 1 ms");
}

std::optional<double> measure_cbp(const sps::SensingWindow& w, SubframeIndex n, double rssi_threshold_dbm,
                                  int cbp_window) {
  if (cbp_window <= 0 || cbp_window > w.span())
    throw std::invalid_argument("measure_cbp: window must be within the sensing span");
  std::uint64_t sensed = 0;
  std::uint64_t busy = 0;
  for (SubframeIndex m = std::max<SubframeIndex>(0, n - cbp_window); m < n; ++m) {
    if (w.state(m) != sps::SlotState::sensed) continue;
    for (int s = 0; s < w.subchannels(); ++s) {
      ++sensed;
      if (w.srssi_dbm(m, s) > rssi_threshold_dbm) ++busy;
    }
  }
  if (sensed == 0) return std::nullopt;
  return 100.0 * static_cast<double>(busy) / static_cast<double>(sensed);
}

int count_neighbors(std::size_t host, std::span<const Position> all, double radius_m,
                    const channel::DistanceFn& dist) {
  if (!(radius_m > 0.0)) throw std::invalid_argument("count_neighbors: radius must be > 0");
  int count = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i == host) continue;
    const double d = dist ? dist(all[host], all[i]) : distance(all[host], all[i]);
    if (d <= radius_m) ++count;
  }
  return count;
}

double smooth_density(double n_new, double n_prev_smoothed, double factor) {
  return (1.0 - factor) * n_prev_smoothed + factor * n_new;
}

double compute_itt(double n, const RateControlConfig& cfg) {
  const double b = cfg.density_coefficient;
  if (n <= b) return 100.0;
  if (n < (cfg.itt_max_ms / 100.0) * b) return (n / b) * 100.0;
  return cfg.itt_max_ms;
}

double power_target(double cbp, const RangeControlConfig& cfg) {
  if (cbp < cfg.u_min_pct) return cfg.p_max_dbm;
  if (cbp < cfg.u_max_pct)
    return cfg.p_min_dbm + ((cfg.u_max_pct - cbp) / (cfg.u_max_pct - cfg.u_min_pct)) * (cfg.p_max_dbm - cfg.p_min_dbm);
  return cfg.p_min_dbm;
}

double update_power(double p_k, double cbp, const RangeControlConfig& cfg) {
  const double next = p_k + cfg.eta * (power_target(cbp, cfg) - p_k);
  return std::clamp(next, cfg.p_min_dbm, cfg.p_max_dbm);
}

double update_pte(const KinematicState& actual, const BroadcastState& last, SubframeIndex now) {
  if (now < last.timestamp) throw std::invalid_argument("update_pte: broadcast lies in the future");
  const double dt = static_cast<double>(now - last.timestamp) / 1000.0;
  const double ex = last.position.x + last.velocity.x * dt;
  const double ey = last.position.y + last.velocity.y * dt;
  return std::hypot(actual.position.x - ex, actual.position.y - ey);
}

bool should_transmit(const DccState& state, double pte_m, SubframeIndex now, const RateControlConfig& cfg) {
  if (!state.last_tx_time) return true;
  return static_cast<double>(now - *state.last_tx_time) >= state.itt_ms || pte_m > cfg.pte_threshold_m;
}

}  // namespace cv2x::dcc
