#include "cv2x/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "cv2x/core/rng.hpp"

namespace cv2x::metrics {

void MetricsConfig::validate() const {
  if (!(bin_width_m > 0.0)) throw std::invalid_argument("metrics: bin width must be > 0");
  if (!(max_distance_m > bin_width_m)) throw std::invalid_argument("metrics: max distance must exceed bin width");
  if (!(roi_radius_m > 0.0)) throw std::invalid_argument("metrics: ROI radius must be > 0");
}

std::size_t PairKeyHash::operator()(const PairKey& k) const noexcept {
  return static_cast<std::size_t>(mix64(mix64(k.run) ^ (static_cast<std::uint64_t>(k.tx) << 32 | k.rx)));
}

std::size_t PairBinHash::operator()(const PairBin& k) const noexcept {
  return PairKeyHash{}(k.pair) ^ static_cast<std::size_t>(mix64(static_cast<std::uint64_t>(k.bin) + 1));
}

std::vector<PairKey> PairLedger::sorted_keys() const {
  std::vector<PairKey> keys;
  keys.reserve(pairs.size());
  for (const auto& kv : pairs) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end());
  return keys;
}

int DistanceBins::bin_of(double d) const {
  if (!(d >= 0.0) || d >= max_m) return -1;
  return static_cast<int>(d / width_m);
}

int DistanceBins::bin_count() const { return static_cast<int>(std::ceil(max_m / width_m)); }

MetricsStore::MetricsStore(const MetricsConfig& cfg, double observation_s)
    : cfg_(cfg), observation_s_(observation_s) {
  if (!(observation_s > 0.0)) throw std::invalid_argument("MetricsStore: observation time must be > 0");
  bins_.width_m = cfg.bin_width_m;
  bins_.max_m = cfg.max_distance_m;
}

void MetricsStore::record(const PairKey& key, SubframeIndex t, double d, bool decoded, int bytes) {
  auto& h = ledger_.pairs[key];
  ++h.attempts;
  h.max_distance_m = std::max(h.max_distance_m, d);
  if (decoded) {
    if (!h.receptions.empty() && h.receptions.back().t >= t)
      throw std::invalid_argument("MetricsStore: receptions must be strictly increasing in time");
    h.receptions.push_back({t, d});
    h.bytes += static_cast<std::uint64_t>(bytes);
  }
  const int b = bins_.bin_of(d);
  if (b < 0) return;
  auto& c = bins_.cells[{key, b}];
  ++c.tx;
  if (decoded) {
    ++c.rx;
    c.bytes += static_cast<std::uint64_t>(bytes);
  }
}

void MetricsStore::merge(const MetricsStore& other) {
  if (other.bins_.width_m != bins_.width_m || other.bins_.max_m != bins_.max_m)
    throw std::invalid_argument("MetricsStore::merge: binning mismatch");
  if (other.observation_s_ != observation_s_)
    throw std::invalid_argument("MetricsStore::merge: observation time mismatch");
  for (const auto& [k, c] : other.bins_.cells) {
    auto& mine = bins_.cells[k];
    mine.tx += c.tx;
    mine.rx += c.rx;
    mine.bytes += c.bytes;
  }
  for (const auto& [k, h] : other.ledger_.pairs) {
    auto& mine = ledger_.pairs[k];
    mine.attempts += h.attempts;
    mine.bytes += h.bytes;
    mine.max_distance_m = std::max(mine.max_distance_m, h.max_distance_m);
    mine.receptions.insert(mine.receptions.end(), h.receptions.begin(), h.receptions.end());
    std::sort(mine.receptions.begin(), mine.receptions.end(),
              [](const Reception& a, const Reception& b) { return a.t < b.t || (a.t == b.t && a.distance_m < b.distance_m); });
  }
}

MetricsStore MetricsStore::relabeled(std::uint32_t run) const {
  MetricsStore out(cfg_, observation_s_);
  for (const auto& [k, c] : bins_.cells) {
    PairBin key = k;
    key.pair.run = run;
    out.bins_.cells[key] = c;
  }
  for (const auto& [k, h] : ledger_.pairs) {
    PairKey key = k;
    key.run = run;
    out.ledger_.pairs[key] = h;
  }
  return out;
}

namespace {

std::vector<std::pair<PairBin, BinCell>> sorted_cells(const DistanceBins& bins) {
  std::vector<std::pair<PairBin, BinCell>> v(bins.cells.begin(), bins.cells.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

template <typename PerPair>
std::vector<BinValue> pair_mean(const DistanceBins& bins, PerPair value) {
  std::map<int, std::pair<double, std::size_t>> acc;
  for (const auto& [key, cell] : sorted_cells(bins)) {
    if (cell.tx == 0) continue;
    auto& a = acc[key.bin];
    a.first += value(cell);
    ++a.second;
  }
  std::vector<BinValue> out;
  for (const auto& [b, a] : acc) {
    out.push_back({b * bins.width_m, (b + 1) * bins.width_m, a.first / static_cast<double>(a.second), a.second});
  }
  return out;
}

}  // namespace

std::vector<BinValue> pdr(const DistanceBins& bins, PdrAveraging averaging) {
  if (averaging == PdrAveraging::pair) {
    return pair_mean(bins, [](const BinCell& c) { return static_cast<double>(c.rx) / static_cast<double>(c.tx); });
  }
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> acc;
  std::map<int, std::size_t> pairs;
  for (const auto& [key, cell] : bins.cells) {
    if (cell.tx == 0) continue;
    acc[key.bin].first += cell.rx;
    acc[key.bin].second += cell.tx;
    ++pairs[key.bin];
  }
  std::vector<BinValue> out;
  for (const auto& [b, a] : acc) {
    out.push_back({b * bins.width_m, (b + 1) * bins.width_m,
                   static_cast<double>(a.first) / static_cast<double>(a.second), pairs[b]});
  }
  return out;
}

std::vector<BinValue> slt(const DistanceBins& bins, double observation_s) {
  if (!(observation_s > 0.0)) throw std::invalid_argument("slt: observation time must be > 0");
  return pair_mean(bins, [&](const BinCell& c) { return static_cast<double>(c.bytes) / observation_s; });
}

IpgStats ipg_stats(const PairLedger& ledger, double bin_width_m, double max_distance_m) {
  IpgStats out;
  std::vector<double> all;
  std::map<int, std::pair<double, std::size_t>> per_bin;
  for (const auto& key : ledger.sorted_keys()) {
    const auto& h = ledger.pairs.at(key);
    for (std::size_t i = 1; i < h.receptions.size(); ++i) {
      const double gap = static_cast<double>(h.receptions[i].t - h.receptions[i - 1].t);
      all.push_back(gap);
      const double d = h.receptions[i].distance_m;
      if (d >= 0.0 && d < max_distance_m) {
        auto& a = per_bin[static_cast<int>(d / bin_width_m)];
        a.first += gap;
        ++a.second;
      }
    }
  }
  for (const auto& [b, a] : per_bin) {
    out.mean_per_bin.push_back({b * bin_width_m, (b + 1) * bin_width_m, a.first / static_cast<double>(a.second), a.second});
  }
  out.gaps = all.size();
  out.p80_ms = std::numeric_limits<double>::quiet_NaN();
  if (all.empty()) return out;
  std::sort(all.begin(), all.end());
  const double n = static_cast<double>(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i + 1 < all.size() && all[i + 1] == all[i]) continue;
    out.ecdf.push_back({all[i], static_cast<double>(i + 1) / n, i + 1});
  }
  for (const auto& p : out.ecdf) {
    // Integer comparison avoids 0.8 * n rounding at the boundary.
    if (p.cumulative * 5 >= all.size() * 4) {
      out.p80_ms = p.gap_ms;
      break;
    }
  }
  return out;
}

RoiPredicate within_radius(double radius_m) {
  return [radius_m](const PairKey&, const PairHistory& h) { return h.attempts > 0 && h.max_distance_m <= radius_m; };
}

BlindReport blind_nodes(const PairLedger& ledger, const RoiPredicate& in_roi) {
  BlindReport out;
  std::set<std::pair<std::uint32_t, UeId>> blind_receivers;
  for (const auto& key : ledger.sorted_keys()) {
    const auto& h = ledger.pairs.at(key);
    if (!h.receptions.empty() || !in_roi(key, h)) continue;
    out.pairs.push_back(key);
    blind_receivers.insert({key.run, key.rx});
  }
  out.blind_ues = blind_receivers.size();
  return out;
}

MetricsReport make_report(const MetricsStore& store) {
  MetricsReport r;
  r.bin_width_m = store.bins().width_m;
  r.pdr = pdr(store.bins(), store.config().pdr_averaging);
  r.slt = slt(store.bins(), store.observation_s());
  r.ipg = ipg_stats(store.ledger(), store.bins().width_m, store.bins().max_m);
  r.blind = blind_nodes(store.ledger(), within_radius(store.config().roi_radius_m));
  return r;
}

std::vector<GainRow> gains(const MetricsReport& dcc, const MetricsReport& baseline) {
  if (dcc.bin_width_m != baseline.bin_width_m) throw std::invalid_argument("gains: bin width mismatch");
  auto index = [](const std::vector<BinValue>& rows) {
    std::map<double, double> m;
    for (const auto& r : rows) m[r.lo_m] = r.value;
    return m;
  };
  const auto dp = index(dcc.pdr), bp = index(baseline.pdr);
  const auto ds = index(dcc.slt), bs = index(baseline.slt);
  std::vector<GainRow> out;
  for (const auto& [lo, v] : dp) {
    const auto it = bp.find(lo);
    if (it == bp.end()) continue;
    GainRow g;
    g.lo_m = lo;
    g.hi_m = lo + dcc.bin_width_m;
    g.pdr_gain_pp = 100.0 * (v - it->second);
    g.slt_gain_bytes_per_s = ds.at(lo) - bs.at(lo);
    out.push_back(g);
  }
  return out;
}

}  // namespace cv2x::metrics
