#include "cv2x/channel/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cv2x::channel {

void ChannelModel::validate() const {
  if (!(reference_distance_m > 0.0)) throw std::invalid_argument("channel: reference distance must be > 0");
  if (!(pathloss_exponent > 0.0)) throw std::invalid_argument("channel: pathloss exponent must be > 0");
  if (breakpoint_m > 0.0 && !(pathloss_exponent_far > 0.0))
    throw std::invalid_argument("channel: far pathloss exponent must be > 0");
  if (!(shadowing_sigma_db >= 0.0)) throw std::invalid_argument("channel: shadowing sigma must be >= 0");
  if (fading == Fading::nakagami && !(nakagami_m >= 0.5))
    throw std::invalid_argument("channel: Nakagami m must be >= 0.5");
  if (!(sensitivity_dbm >= noise_floor_dbm))
    throw std::invalid_argument("channel: sensitivity must be >= noise floor");
}

ChannelModel ChannelModel::single_slope(double d0, double pl0, double exponent) {
  ChannelModel m;
  m.reference_distance_m = d0;
  m.reference_loss_db = pl0;
  m.pathloss_exponent = exponent;
  m.breakpoint_m = 0.0;
  m.shadowing_sigma_db = 0.0;
  return m;
}

double pathloss(double d_m, const ChannelModel& m) {
  const double d = std::max(d_m, m.reference_distance_m);
  if (m.breakpoint_m > m.reference_distance_m && d > m.breakpoint_m) {
    const double at_bp =
        m.reference_loss_db + 10.0 * m.pathloss_exponent * std::log10(m.breakpoint_m / m.reference_distance_m);
    return at_bp + 10.0 * m.pathloss_exponent_far * std::log10(d / m.breakpoint_m);
  }
  return m.reference_loss_db + 10.0 * m.pathloss_exponent * std::log10(d / m.reference_distance_m);
}

PowerDbm received_power(PowerDbm tx, double d_m, double shadow_db, double fade_db, const ChannelModel& m) {
  return PowerDbm{tx.value - pathloss(d_m, m) - shadow_db - fade_db};
}

const char* to_string(RxStatus s) {
  switch (s) {
    case RxStatus::decoded: return "decoded";
    case RxStatus::collided: return "collided";
    case RxStatus::below_sensitivity: return "below_sensitivity";
    case RxStatus::half_duplex_blocked: return "half_duplex_blocked";
  }
  return "?";
}

RxMeasurement SubframeResult::measurement(std::size_t rx_index, std::span<const Transmission> txs) const {
  RxMeasurement m;
  m.subframe = subframe;
  m.sensed = sensed[rx_index] != 0;
  if (!m.sensed) return m;
  m.srssi_dbm.assign(srssi_dbm.begin() + static_cast<std::ptrdiff_t>(rx_index * subchannels),
                     srssi_dbm.begin() + static_cast<std::ptrdiff_t>((rx_index + 1) * subchannels));
  for (const auto& o : outcomes_of(rx_index)) {
    if (o.status != RxStatus::decoded) continue;
    const auto& t = txs[o.tx_index];
    m.decoded.push_back({t.csr.subchannel, t.ue, o.signal_dbm, t.reservation_period_ms});
  }
  return m;
}

void resolve_subframe(std::span<const Transmission> transmissions, std::span<const Receiver> receivers,
                      int subchannels, const ChannelModel& model, const LinkDrawFn& draw,
                      const DistanceFn& dist, SubframeResult& out) {
  if (subchannels <= 0) throw std::invalid_argument("resolve_subframe: subchannels must be positive");
  for (const auto& t : transmissions) {
    if (t.csr.subframe != transmissions.front().csr.subframe)
      throw std::invalid_argument("resolve_subframe: transmissions span multiple subframes");
    if (t.csr.subchannel < 0 || t.csr.subchannel >= subchannels)
      throw std::invalid_argument("resolve_subframe: subchannel out of range");
  }

  const double noise_mw = dbm_to_mw(PowerDbm{model.noise_floor_dbm}).value;
  const double threshold_db = model.sinr_threshold_db;
  const std::size_t n_tx = transmissions.size();

  out.subframe = transmissions.empty() ? out.subframe : transmissions.front().csr.subframe;
  out.subchannels = subchannels;
  out.outcomes.clear();
  out.outcome_begin.assign(receivers.size() + 1, 0);
  out.srssi_dbm.assign(receivers.size() * static_cast<std::size_t>(subchannels), model.noise_floor_dbm);
  out.sensed.assign(receivers.size(), 1);

  std::vector<double> signal_mw(n_tx);
  std::vector<double> signal_dbm(n_tx);
  std::vector<double> dist_m(n_tx);
  std::vector<double> total_mw(static_cast<std::size_t>(subchannels));

  for (std::size_t r = 0; r < receivers.size(); ++r) {
    out.outcome_begin[r] = out.outcomes.size();
    const Receiver& rx = receivers[r];
    bool transmitting = false;
    for (const auto& t : transmissions) transmitting |= (t.ue == rx.ue);

    if (transmitting) {
      out.sensed[r] = 0;
      for (std::size_t i = 0; i < n_tx; ++i) {
        const auto& t = transmissions[i];
        if (t.ue == rx.ue) continue;
        const double d = dist ? dist(t.position, rx.position) : distance(t.position, rx.position);
        out.outcomes.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(r),
                                RxStatus::half_duplex_blocked, 0.0, 0.0, d});
      }
      continue;
    }

    std::fill(total_mw.begin(), total_mw.end(), 0.0);
    for (std::size_t i = 0; i < n_tx; ++i) {
      const auto& t = transmissions[i];
      dist_m[i] = dist ? dist(t.position, rx.position) : distance(t.position, rx.position);
      const LinkDraw ld = draw ? draw(i, r) : LinkDraw{};
      signal_dbm[i] = received_power(t.power, dist_m[i], ld.shadow_db, ld.fade_db, model).value;
      signal_mw[i] = dbm_to_mw(PowerDbm{signal_dbm[i]}).value;
      total_mw[static_cast<std::size_t>(t.csr.subchannel)] += signal_mw[i];
    }
    for (int s = 0; s < subchannels; ++s) {
      out.srssi_dbm[r * static_cast<std::size_t>(subchannels) + static_cast<std::size_t>(s)] =
          mw_to_dbm(PowerMw{total_mw[static_cast<std::size_t>(s)] + noise_mw}).value;
    }
    for (std::size_t i = 0; i < n_tx; ++i) {
      const auto& t = transmissions[i];
      double interference_mw = 0.0;
      for (std::size_t j = 0; j < n_tx; ++j) {
        if (j != i && transmissions[j].csr.subchannel == t.csr.subchannel) interference_mw += signal_mw[j];
      }
      const double sinr_db = 10.0 * std::log10(signal_mw[i] / (interference_mw + noise_mw));
      RxStatus status = RxStatus::decoded;
      if (signal_dbm[i] < model.sensitivity_dbm) {
        status = RxStatus::below_sensitivity;
      } else if (sinr_db < threshold_db) {
        status = RxStatus::collided;
      }
      out.outcomes.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(r), status,
                              signal_dbm[i], sinr_db, dist_m[i]});
    }
  }
  out.outcome_begin[receivers.size()] = out.outcomes.size();
}

SubframeResult resolve_subframe(std::span<const Transmission> transmissions,
                                std::span<const Receiver> receivers, int subchannels,
                                const ChannelModel& model, const LinkDrawFn& draw, const DistanceFn& dist) {
  SubframeResult out;
  resolve_subframe(transmissions, receivers, subchannels, model, draw, dist, out);
  return out;
}

}  // namespace cv2x::channel
