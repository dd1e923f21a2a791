#include "cv2x/sps/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cv2x::sps {

void SpsConfig::validate() const {
  if (!(t1 > 0 && t1 <= t2)) throw std::invalid_argument("sps: require 0 < t1 <= t2");
  if (slrrc_min < 1 || slrrc_min > slrrc_max) throw std::invalid_argument("sps: require 1 <= slrrc_min <= slrrc_max");
  if (!(p_resel >= 0.0 && p_resel <= 1.0)) throw std::invalid_argument("sps: p_resel must be in [0, 1]");
  if (sensing_window <= 0) throw std::invalid_argument("sps: sensing window must be positive");
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw std::invalid_argument("sps: keep fraction must be in (0, 1]");
  if (!(escalation_step_db > 0.0)) throw std::invalid_argument("sps: escalation step must be positive");
  if (rssi_projection_period_ms <= 0) throw std::invalid_argument("sps: rssi projection period must be positive");
  for (int p : unsensed_periods_ms)
    if (p <= 0) throw std::invalid_argument("sps: unsensed periods must be positive");
}

std::size_t keep_count(std::size_t initial, double fraction) {
  // The epsilon absorbs representation error in products such as 0.2 * 15.
  return static_cast<std::size_t>(std::ceil(static_cast<double>(initial) * fraction - 1e-9));
}

CandidateSet candidate_set(const SensingWindow& w, SubframeIndex n, const SpsConfig& cfg,
                           std::span<const std::uint32_t> tie_rank) {
  const SubframeIndex lo = n + cfg.t1;
  const SubframeIndex hi = n + cfg.t2;
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  const int nsub = w.subchannels();
  const std::size_t total = width * static_cast<std::size_t>(nsub);
  if (!tie_rank.empty() && tie_rank.size() != total)
    throw std::invalid_argument("candidate_set: tie_rank size must equal the candidate count");

  auto index_of = [&](SubframeIndex y, int s) {
    return static_cast<std::size_t>(y - lo) * static_cast<std::size_t>(nsub) + static_cast<std::size_t>(s);
  };
  constexpr double kNone = -std::numeric_limits<double>::infinity();

  // Strongest reservation predicted onto each candidate.
  std::vector<double> predicted_rsrp(total, kNone);
  for (const auto& r : w.reservations()) {
    if (r.period_ms <= 0 || r.subframe >= n) continue;
    const SubframeIndex p = r.period_ms;
    SubframeIndex k = std::max<SubframeIndex>(1, (lo - r.subframe + p - 1) / p);
    for (SubframeIndex y = r.subframe + k * p; y <= hi; y += p) {
      if (y < lo) continue;
      auto& slot = predicted_rsrp[index_of(y, r.subchannel)];
      slot = std::max(slot, r.rsrp_dbm);
    }
  }

  std::vector<std::uint8_t> unsensed_hit(width, 0);
  if (cfg.unsensed_policy == UnsensedPolicy::exclude && w.newest()) {
    const SubframeIndex first = std::max<SubframeIndex>(0, *w.newest() - w.span() + 1);
    const SubframeIndex last = std::min<SubframeIndex>(*w.newest(), n - 1);
    for (SubframeIndex u = first; u <= last; ++u) {
      if (w.state(u) != SlotState::unsensed) continue;
      for (int q : cfg.unsensed_periods_ms) {
        SubframeIndex k = std::max<SubframeIndex>(1, (lo - u + q - 1) / q);
        for (SubframeIndex y = u + k * q; y <= hi; y += q) {
          if (y >= lo) unsensed_hit[static_cast<std::size_t>(y - lo)] = 1;
        }
      }
    }
  }

  double strongest = kNone;
  for (double v : predicted_rsrp) strongest = std::max(strongest, v);

  CandidateSet out;
  out.initial_size = total;
  const std::size_t target = keep_count(total, cfg.keep_fraction);

  auto survives = [&](std::size_t idx, double threshold, bool use_unsensed) {
    if (predicted_rsrp[idx] > threshold) return false;
    return !(use_unsensed && unsensed_hit[idx / static_cast<std::size_t>(nsub)]);
  };

  int escalations = 0;
  bool use_unsensed = true;
  double threshold = cfg.th_sps_dbm;
  std::vector<std::size_t> alive;
  for (;;) {
    threshold = cfg.th_sps_dbm + cfg.escalation_step_db * escalations;
    alive.clear();
    for (std::size_t idx = 0; idx < total; ++idx)
      if (survives(idx, threshold, use_unsensed)) alive.push_back(idx);
    if (alive.size() >= target) break;
    if (strongest > threshold) {
      ++escalations;
    } else if (use_unsensed) {
      use_unsensed = false;
    } else {
      break;
    }
  }
  out.threshold_dbm = threshold;
  out.escalations = escalations;
  out.unsensed_released = !use_unsensed;
  out.survivors = alive.size();

  // Average S-RSSI over the candidate's sensed past occurrences.
  const SubframeIndex step = cfg.rssi_projection_period_ms;
  const SubframeIndex oldest = w.newest() ? std::max<SubframeIndex>(0, *w.newest() - w.span() + 1)
                                          : std::numeric_limits<SubframeIndex>::max();
  std::vector<double> score(total, kNone);
  for (std::size_t idx : alive) {
    const SubframeIndex y = lo + static_cast<SubframeIndex>(idx / static_cast<std::size_t>(nsub));
    const int s = static_cast<int>(idx % static_cast<std::size_t>(nsub));
    double acc = 0.0;
    int count = 0;
    for (SubframeIndex m = y - step; m >= oldest; m -= step) {
      if (m >= n || w.state(m) != SlotState::sensed) continue;
      const double v = w.srssi_dbm(m, s);
      acc += cfg.rssi_averaging == RssiAveraging::linear ? dbm_to_mw(PowerDbm{v}).value : v;
      ++count;
    }
    if (count > 0) score[idx] = acc / count;
  }

  std::sort(alive.begin(), alive.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] < score[b];
    if (!tie_rank.empty() && tie_rank[a] != tie_rank[b]) return tie_rank[a] < tie_rank[b];
    return a < b;
  });
  alive.resize(std::min(alive.size(), target));
  out.kept.reserve(alive.size());
  for (std::size_t idx : alive) {
    out.kept.push_back({lo + static_cast<SubframeIndex>(idx / static_cast<std::size_t>(nsub)),
                        static_cast<int>(idx % static_cast<std::size_t>(nsub))});
  }
  return out;
}

Csr select_resource(const SensingWindow& w, SubframeIndex n, const SpsConfig& cfg, RngStream& rng,
                    CandidateSet* trace) {
  const auto total = static_cast<std::size_t>(cfg.t2 - cfg.t1 + 1) * static_cast<std::size_t>(w.subchannels());
  std::vector<std::uint32_t> tie_rank;
  if (cfg.tie_break == TieBreak::random) {
    tie_rank.resize(total);
    std::iota(tie_rank.begin(), tie_rank.end(), 0u);
    rng.shuffle(std::span<std::uint32_t>(tie_rank));
  }
  CandidateSet set = candidate_set(w, n, cfg, tie_rank);
  const Csr chosen = set.kept[static_cast<std::size_t>(rng.below(set.kept.size()))];
  if (trace) *trace = std::move(set);
  return chosen;
}

}  // namespace cv2x::sps
