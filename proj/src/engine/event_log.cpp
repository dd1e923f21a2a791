#include <bit>
#include <cstring>
#include <sstream>

#include "cv2x/engine/engine.hpp"
#include "cv2x/metrics/metrics.hpp"

namespace cv2x::engine {

namespace {

class Fnv1a {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= b[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  // Fixed little-endian encoding so the digest is platform independent.
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(b, 8);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t EventLog::digest() const {
  Fnv1a h;
  h.u64(tx.size());
  for (const auto& e : tx) {
    h.i64(e.subframe);
    h.i64(e.generated);
    h.u64(e.ue);
    h.i64(e.subchannel);
    h.f64(e.power_dbm);
    h.f64(e.position.x);
    h.i64(e.position.lane);
    h.i64(e.reservation_period_ms);
    h.i64(e.bytes);
    h.u64((e.measured ? 1u : 0u) | (e.pte_triggered ? 2u : 0u));
  }
  h.u64(rx.size());
  for (const auto& r : rx) {
    h.u64(r.tx);
    h.u64(r.receiver);
    h.f64(static_cast<double>(r.distance_m));
    h.u64(static_cast<std::uint64_t>(r.status));
  }
  return h.value();
}

std::string EventLog::tx_csv() const {
  std::ostringstream os;
  os << "subframe,generated,ue,subchannel,power_dbm,x_m,lane,period_ms,bytes,measured,pte\n";
  for (const auto& e : tx) {
    os << e.subframe << ',' << e.generated << ',' << e.ue << ',' << e.subchannel << ','
       << metrics::format6(e.power_dbm) << ',' << metrics::format6(e.position.x) << ',' << e.position.lane << ','
       << e.reservation_period_ms << ',' << e.bytes << ',' << int(e.measured) << ',' << int(e.pte_triggered) << '\n';
  }
  return os.str();
}

std::string EventLog::rx_csv() const {
  std::ostringstream os;
  os << "tx_index,rx_ue,distance_m,status\n";
  for (const auto& r : rx)
    os << r.tx << ',' << r.receiver << ',' << metrics::format6(r.distance_m) << ',' << channel::to_string(r.status)
       << '\n';
  return os.str();
}

}  // namespace cv2x::engine
