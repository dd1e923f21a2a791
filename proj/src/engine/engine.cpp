#include "cv2x/engine/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "cv2x/core/rng.hpp"
#include "cv2x/sps/grant.hpp"

namespace cv2x::engine {

namespace {

template <typename F>
void check(std::vector<std::string>& out, const char* what, F&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    out.push_back(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> RunConfig::violations() const {
  std::vector<std::string> v;
  if (!(duration_s > 0.0)) v.push_back("run.duration_s must be > 0");
  if (!(warmup_s >= 0.0)) v.push_back("run.warmup_s must be >= 0");
  if (!(warmup_s < duration_s)) v.push_back("run.warmup_s must be < run.duration_s");
  if (subchannels < 1) v.push_back("run.subchannels must be >= 1");
  if (payload_bytes < 1) v.push_back("run.payload_bytes must be >= 1");
  if (mcs_index < 0 || mcs_index > 31) v.push_back("run.mcs_index must be in [0, 31]");
  if (mobility_tick_ms < 1) v.push_back("run.mobility_tick_ms must be >= 1");
  if (timeseries_interval_ms < 1) v.push_back("run.timeseries_interval_ms must be >= 1");
  check(v, "scenario", [&] { scenario.validate(); });
  check(v, "dcc", [&] { dcc.validate(); });
  check(v, "sps", [&] { sps.validate(); });
  check(v, "channel", [&] { channel.validate(); });
  check(v, "metrics", [&] { metrics.validate(); });
  if (sps.sensing_window < dcc.cbp_window_ms) v.push_back("dcc.cbp_window_ms must not exceed sps.sensing_window_ms");
  return v;
}

void RunConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid run config:";
  for (const auto& s : v) os << "\n  " << s;
  throw std::invalid_argument(os.str());
}

SubframeIndex RunConfig::total_subframes() const { return static_cast<SubframeIndex>(std::llround(duration_s * 1000.0)); }

SubframeIndex RunConfig::warmup_subframes() const { return static_cast<SubframeIndex>(std::llround(warmup_s * 1000.0)); }

namespace {

struct Packet {
  SubframeIndex generated = 0;
  bool pte = false;
};

struct Ue {
  Ue(const RunConfig& cfg, UeId id)
      : window(cfg.sps.sensing_window, cfg.subchannels),
        sel(cfg.seed, StreamPurpose::selection, id),
        slrrc(cfg.seed, StreamPurpose::slrrc, id),
        shadow(cfg.seed, StreamPurpose::shadowing, id),
        fade(cfg.seed, StreamPurpose::fading, id) {}

  sps::SensingWindow window;
  std::optional<sps::Grant> grant;
  std::optional<Csr> oneshot;
  dcc::DccState dcc;
  std::optional<Packet> pending;  // eligible for transmission
  std::optional<Packet> fresh;    // generated this subframe, eligible from the next
  SubframeIndex start = 0;
  std::deque<SubframeIndex> own_tx;
  RngStream sel;
  RngStream slrrc;
  RngStream shadow;
  RngStream fade;
};

dcc::Vec2 to_vec(const Position& p, double lane_width) { return {p.x, p.lane * lane_width}; }

dcc::KinematicState kinematics(const mobility::VehicleKinematics& v, double lane_width) {
  return {to_vec(v.position, lane_width), {v.speed_mps, 0.0}};
}

class Simulation {
 public:
  explicit Simulation(const RunConfig& cfg) : cfg_(cfg), road_(cfg.scenario) {
    RngStream placement(cfg.seed, StreamPurpose::placement, 0);
    vehicles_ = mobility::generate_scenario(cfg.scenario, placement);
    const auto count = vehicles_.size();
    ues_.reserve(count);
    perturb_rngs_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto id = static_cast<UeId>(i);
      ues_.emplace_back(cfg, id);
      perturb_rngs_.emplace_back(cfg.seed, StreamPurpose::perturbation, id);
      RngStream offset(cfg.seed, StreamPurpose::start_offset, id);
      ues_[i].start = static_cast<SubframeIndex>(offset.below(100));
      auto& d = ues_[i].dcc;
      if (cfg.dcc.enabled) {
        d.itt_ms = 100.0;
        d.power_dbm = cfg.dcc.range.p_max_dbm;
      } else {
        d.itt_ms = cfg.dcc.baseline_itt_ms;
        d.power_dbm = cfg.dcc.baseline_power_dbm;
      }
    }
    refresh_positions();
    noise_.assign(static_cast<std::size_t>(cfg.subchannels), cfg.channel.noise_floor_dbm);
    dist_ = [this](const Position& a, const Position& b) { return road_.distance(a, b); };
    draw_ = [this](std::size_t t, std::size_t r) { return link_draw(t, r); };
  }

  RunResult run() {
    const SubframeIndex total = cfg_.total_subframes();
    warmup_ = cfg_.warmup_subframes();
    // Packets generated before the end are still delivered; the drain is
    // bounded by the longest grant period.
    const SubframeIndex hard_stop = total + 2 * static_cast<SubframeIndex>(cfg_.dcc.rate.itt_max_ms) + 1000;
    for (SubframeIndex n = 0; n < hard_stop; ++n) {
      const bool generating = n < total;
      if (!generating && !any_pending()) break;
      if (n > 0 && n % cfg_.mobility_tick_ms == 0) advance_mobility(n);
      control(n, generating);
      transmit(n);
      resolve(n);
      close_subframe(n);
      if (generating && n % cfg_.timeseries_interval_ms == 0) sample(n);
    }
    result_.observation_s = cfg_.duration_s - cfg_.warmup_s;
    result_.stats.mean_queue_delay_ms =
        delay_count_ ? delay_sum_ / static_cast<double>(delay_count_) : 0.0;
    result_.store = build_store(result_.log, cfg_);
    return std::move(result_);
  }

 private:
  bool any_pending() const {
    return std::any_of(ues_.begin(), ues_.end(), [](const Ue& u) { return u.pending || u.fresh; });
  }

  void refresh_positions() {
    positions_.resize(vehicles_.size());
    receivers_.resize(vehicles_.size());
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      positions_[i] = vehicles_[i].position;
      receivers_[i] = {static_cast<UeId>(i), vehicles_[i].position};
    }
  }

  void advance_mobility(SubframeIndex n) {
    const mobility::Perturbation perturb{cfg_.scenario.perturbation_sigma_mps, cfg_.scenario.perturbation_reversion_per_s};
    mobility::step(vehicles_, cfg_.mobility_tick_ms / 1000.0, road_, perturb, perturb_rngs_);
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      // Keep the extrapolation reference in the same frame as the vehicle.
      ues_[i].dcc.last_broadcast.position.x += vehicles_[i].last_jump_m;
    }
    refresh_positions();
    last_tick_ = n;
  }

  void select(Ue& u, SubframeIndex n) {
    sps::CandidateSet trace;
    const Csr c = sps::select_resource(u.window, n, cfg_.sps, u.sel, &trace);
    ++result_.stats.selections;
    result_.stats.escalations += static_cast<std::uint64_t>(trace.escalations);
    const int period = std::max(1, static_cast<int>(std::lround(u.dcc.itt_ms)));
    u.grant = sps::Grant{c.subframe, c.subchannel, period, sps::draw_slrrc(u.slrrc, cfg_.sps)};
  }

  void select_oneshot(Ue& u, SubframeIndex n) {
    sps::SpsConfig c = cfg_.sps;
    c.t2 = std::max(c.t1, std::min(c.t2, cfg_.dcc.pte_grant_wait_ms));
    sps::CandidateSet trace;
    u.oneshot = sps::select_resource(u.window, n, c, u.sel, &trace);
    ++result_.stats.oneshot_selections;
    result_.stats.escalations += static_cast<std::uint64_t>(trace.escalations);
  }

  void control(SubframeIndex n, bool generating) {
    const auto& dc = cfg_.dcc;
    for (std::size_t i = 0; i < ues_.size(); ++i) {
      Ue& u = ues_[i];
      if (generating && dc.enabled) {
        if (n % dc.density_interval_ms == 0) {
          const double count = dcc::count_neighbors(i, positions_, dc.rate.neighbor_radius_m, dist_);
          u.dcc.n_sta_smoothed = u.dcc.density_seeded
                                     ? dcc::smooth_density(count, u.dcc.n_sta_smoothed, dc.rate.smoothing)
                                     : count;
          u.dcc.density_seeded = true;
          u.dcc.itt_ms = std::round(dcc::compute_itt(u.dcc.n_sta_smoothed, dc.rate));
        }
        if (n > 0 && n % dc.power_interval_ms == 0) {
          if (const auto cbp = dcc::measure_cbp(u.window, n, dc.cbp_rssi_threshold_dbm, dc.cbp_window_ms)) {
            u.dcc.cbp_pct = *cbp;
            u.dcc.power_dbm = dcc::update_power(u.dcc.power_dbm, *cbp, dc.range);
          }
        }
      }
      if (generating && n >= u.start) {
        double pte = 0.0;
        if (dc.enabled && dc.pte_enabled && u.dcc.last_tx_time && n == last_tick_) {
          pte = dcc::update_pte(kinematics(vehicles_[i], road_.lane_width_m()), u.dcc.last_broadcast, n);
        }
        if (dcc::should_transmit(u.dcc, pte, n, dc.rate)) generate(u, i, n, pte > dc.rate.pte_threshold_m);
      }
      if ((u.pending || u.fresh) && !u.grant && !u.oneshot) select(u, n);
    }
  }

  void generate(Ue& u, std::size_t i, SubframeIndex n, bool pte_triggered) {
    const bool timer_expired =
        !u.dcc.last_tx_time || static_cast<double>(n - *u.dcc.last_tx_time) >= u.dcc.itt_ms;
    const bool by_pte = pte_triggered && !timer_expired;
    ++result_.stats.generated;
    if (by_pte) ++result_.stats.pte_triggers;
    u.fresh = Packet{n, by_pte};
    u.dcc.last_tx_time = n;
    const auto k = kinematics(vehicles_[i], road_.lane_width_m());
    u.dcc.last_broadcast = {k.position, k.velocity, last_tick_};
    if (by_pte && u.grant && u.grant->next_tx - n > cfg_.dcc.pte_grant_wait_ms) select_oneshot(u, n);
  }

  double current_cbp_ratio(const Ue& u, SubframeIndex n) const {
    const auto cbp = dcc::measure_cbp(u.window, n, cfg_.dcc.cbp_rssi_threshold_dbm, cfg_.dcc.cbp_window_ms);
    return cbp ? *cbp / 100.0 : 0.0;
  }

  bool cr_exceeded(Ue& u, SubframeIndex n) {
    const auto& lim = cfg_.dcc.cr_limit;
    const SubframeIndex span = cfg_.sps.sensing_window;
    while (!u.own_tx.empty() && u.own_tx.front() <= n - span) u.own_tx.pop_front();
    const double pool = static_cast<double>(span) * cfg_.subchannels;
    const double cr = static_cast<double>(u.own_tx.size() + 1) / pool;
    const double limit = sps::cr_limit(current_cbp_ratio(u, n), lim.cbp_limit_pct / 100.0,
                                       [&](double c) { return lim.calibration(c); });
    return cr > limit;
  }

  void transmit(SubframeIndex n) {
    txs_.clear();
    tx_ue_.clear();
    on_grant_.clear();
    for (std::size_t i = 0; i < ues_.size(); ++i) {
      Ue& u = ues_[i];
      const bool at_grant = u.grant && u.grant->next_tx == n;
      const bool at_oneshot = u.oneshot && u.oneshot->subframe == n;
      if (!u.pending) {
        if (at_grant) {
          u.grant->next_tx += u.grant->period_ms;
          ++result_.stats.skipped_occurrences;
        }
        if (at_oneshot) u.oneshot.reset();
        continue;
      }
      if (!at_grant && !at_oneshot) continue;
      const int subchannel = at_grant ? u.grant->subchannel : u.oneshot->subchannel;
      const int period = at_grant ? u.grant->period_ms : 0;
      u.oneshot.reset();
      const Packet pkt = *u.pending;
      u.pending.reset();
      if (cfg_.dcc.cr_limit.enabled && cr_exceeded(u, n)) {
        ++result_.stats.cr_drops;
        if (at_grant) u.grant->next_tx += u.grant->period_ms;
        continue;
      }
      u.own_tx.push_back(n);
      const Position pos = vehicles_[i].position;
      txs_.push_back({static_cast<UeId>(i), Csr{n, subchannel}, PowerDbm{u.dcc.power_dbm}, pos, period});
      tx_ue_.push_back(i);
      on_grant_.push_back(at_grant);

      TxEvent ev;
      ev.subframe = n;
      ev.generated = pkt.generated;
      ev.ue = static_cast<UeId>(i);
      ev.subchannel = subchannel;
      ev.power_dbm = u.dcc.power_dbm;
      ev.position = pos;
      ev.reservation_period_ms = period;
      ev.bytes = cfg_.payload_bytes;
      ev.measured = n >= warmup_ && road_.in_measurement_region(pos);
      ev.pte_triggered = pkt.pte;
      result_.log.tx.push_back(ev);
      delay_sum_ += static_cast<double>(n - pkt.generated);
      ++delay_count_;
    }
  }

  channel::LinkDraw link_draw(std::size_t t, std::size_t r) {
    const auto& ch = cfg_.channel;
    channel::LinkDraw d;
    if (ch.shadowing_sigma_db > 0.0) {
      if (ch.shadowing_mode == channel::ShadowingMode::iid) {
        d.shadow_db = ues_[r].shadow.normal() * ch.shadowing_sigma_db;
      } else {
        const std::uint64_t a = txs_[t].ue, b = receivers_[r].ue;
        d.shadow_db = RngStream::keyed_normal(cfg_.seed, StreamPurpose::static_shadowing, std::min(a, b),
                                              std::max(a, b)) *
                      ch.shadowing_sigma_db;
      }
    }
    if (ch.fading == channel::Fading::nakagami) {
      const double gain = ues_[r].fade.gamma(ch.nakagami_m) / ch.nakagami_m;
      d.fade_db = -10.0 * std::log10(std::max(gain, 1e-300));
    }
    return d;
  }

  void resolve(SubframeIndex n) {
    if (txs_.empty()) {
      for (auto& u : ues_) u.window.record(n, noise_, {});
      return;
    }
    channel::resolve_subframe(txs_, receivers_, cfg_.subchannels, cfg_.channel, draw_, dist_, frame_);
    const auto base = static_cast<std::uint32_t>(result_.log.tx.size() - txs_.size());
    const bool all = cfg_.log_scope == LogScope::all;
    for (std::size_t r = 0; r < ues_.size(); ++r) {
      Ue& u = ues_[r];
      decoded_.clear();
      for (const auto& o : frame_.outcomes_of(r)) {
        const auto tx_index = base + o.tx_index;
        const bool measured = result_.log.tx[tx_index].measured;
        if (all || measured) {
          result_.log.rx.push_back({tx_index, static_cast<UeId>(r), static_cast<float>(o.distance_m), o.status});
        }
        if (measured && o.status == channel::RxStatus::collided) ++result_.stats.collided;
        if (o.status == channel::RxStatus::decoded) {
          const auto& t = txs_[o.tx_index];
          decoded_.push_back({t.csr.subchannel, t.ue, o.signal_dbm, t.reservation_period_ms});
        }
      }
      if (frame_.sensed[r]) {
        const auto row = std::span<const double>(frame_.srssi_dbm)
                             .subspan(r * static_cast<std::size_t>(cfg_.subchannels),
                                      static_cast<std::size_t>(cfg_.subchannels));
        u.window.record(n, row, decoded_);
      } else {
        u.window.record_unsensed(n);
      }
    }
  }

  void close_subframe(SubframeIndex n) {
    for (std::size_t k = 0; k < tx_ue_.size(); ++k) {
      if (!on_grant_[k]) continue;
      Ue& u = ues_[tx_ue_[k]];
      const auto res = sps::on_transmission(*u.grant, u.slrrc, cfg_.sps);
      if (res.decision == sps::GrantDecision::reselect) {
        u.grant.reset();
        continue;
      }
      u.grant = res.grant;
      u.grant->period_ms = std::max(1, static_cast<int>(std::lround(u.dcc.itt_ms)));
      u.grant->next_tx = n + u.grant->period_ms;
    }
    for (auto& u : ues_) {
      if (!u.fresh) continue;
      if (u.pending) ++result_.stats.replaced;
      u.pending = u.fresh;
      u.fresh.reset();
    }
  }

  void sample(SubframeIndex n) {
    double cbp_sum = 0.0, power_sum = 0.0, itt_sum = 0.0;
    std::size_t cbp_n = 0, n_ue = 0;
    for (std::size_t i = 0; i < ues_.size(); ++i) {
      if (!road_.in_measurement_region(vehicles_[i].position)) continue;
      const Ue& u = ues_[i];
      if (const auto cbp = dcc::measure_cbp(u.window, n, cfg_.dcc.cbp_rssi_threshold_dbm, cfg_.dcc.cbp_window_ms)) {
        cbp_sum += *cbp;
        ++cbp_n;
      }
      power_sum += u.dcc.power_dbm;
      itt_sum += u.dcc.itt_ms;
      ++n_ue;
    }
    if (n_ue == 0) return;
    result_.timeseries.push_back({static_cast<double>(n) / 1000.0,
                                  cbp_n ? cbp_sum / static_cast<double>(cbp_n) : 0.0,
                                  power_sum / static_cast<double>(n_ue), itt_sum / static_cast<double>(n_ue)});
  }

  const RunConfig& cfg_;
  mobility::Road road_;
  std::vector<mobility::VehicleKinematics> vehicles_;
  std::vector<RngStream> perturb_rngs_;
  std::vector<Ue> ues_;
  std::vector<Position> positions_;
  std::vector<channel::Receiver> receivers_;
  std::vector<double> noise_;
  channel::DistanceFn dist_;
  channel::LinkDrawFn draw_;
  SubframeIndex warmup_ = 0;
  SubframeIndex last_tick_ = 0;

  std::vector<channel::Transmission> txs_;
  std::vector<std::size_t> tx_ue_;
  std::vector<bool> on_grant_;
  std::vector<channel::DecodedReservation> decoded_;
  channel::SubframeResult frame_;

  double delay_sum_ = 0.0;
  std::uint64_t delay_count_ = 0;
  RunResult result_;
};

}  // namespace

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  Simulation sim(cfg);
  return sim.run();
}

metrics::MetricsStore build_store(const EventLog& log, const RunConfig& cfg) {
  metrics::MetricsStore store(cfg.metrics, cfg.duration_s - cfg.warmup_s);
  for (const auto& r : log.rx) {
    const auto& t = log.tx.at(r.tx);
    if (!t.measured) continue;
    store.record({0, t.ue, r.receiver}, t.subframe, static_cast<double>(r.distance_m),
                 r.status == channel::RxStatus::decoded, t.bytes);
  }
  return store;
}

}  // namespace cv2x::engine
