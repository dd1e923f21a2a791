#include <cmath>
#include <cstdio>
#include <sstream>

#include "cv2x/metrics/metrics.hpp"

namespace cv2x::metrics {

std::string format6(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // normalizes -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {
std::string bin_rows(const char* header, const std::vector<BinValue>& rows) {
  std::ostringstream os;
  os << header << '\n';
  for (const auto& r : rows)
    os << format6(r.lo_m) << ',' << format6(r.hi_m) << ',' << format6(r.value) << ',' << r.count << '\n';
  return os.str();
}
}  // namespace

std::string pdr_csv(const std::vector<BinValue>& rows) { return bin_rows("bin_lo,bin_hi,pdr,n_pairs", rows); }

std::string slt_csv(const std::vector<BinValue>& rows) {
  return bin_rows("bin_lo,bin_hi,slt_bytes_per_s,n_pairs", rows);
}

std::string ipg_csv(const IpgStats& s) {
  std::ostringstream os;
  os << "kind,bin_lo,bin_hi,gap_ms,value,count\n";
  for (const auto& b : s.mean_per_bin)
    os << "bin," << format6(b.lo_m) << ',' << format6(b.hi_m) << ",," << format6(b.value) << ',' << b.count << '\n';
  for (const auto& p : s.ecdf)
    os << "ecdf,,," << format6(p.gap_ms) << ',' << format6(p.fraction) << ',' << p.cumulative << '\n';
  os << "p80,,,," << format6(s.p80_ms) << ',' << s.gaps << '\n';
  return os.str();
}

std::string blind_csv(const BlindReport& r) {
  std::ostringstream os;
  os << "run,tx_ue,rx_ue\n";
  for (const auto& k : r.pairs) os << k.run << ',' << k.tx << ',' << k.rx << '\n';
  return os.str();
}

std::string timeseries_csv(const std::vector<TimeSample>& samples) {
  std::ostringstream os;
  os << "t_s,mean_cbp_pct,mean_power_dbm,mean_itt_ms\n";
  for (const auto& s : samples)
    os << format6(s.t_s) << ',' << format6(s.mean_cbp_pct) << ',' << format6(s.mean_power_dbm) << ','
       << format6(s.mean_itt_ms) << '\n';
  return os.str();
}

std::string gains_csv(const std::vector<GainRow>& rows) {
  std::ostringstream os;
  os << "bin_lo,bin_hi,pdr_gain_pp,slt_gain_bytes_per_s\n";
  for (const auto& g : rows)
    os << format6(g.lo_m) << ',' << format6(g.hi_m) << ',' << format6(g.pdr_gain_pp) << ','
       << format6(g.slt_gain_bytes_per_s) << '\n';
  return os.str();
}

}  // namespace cv2x::metrics
