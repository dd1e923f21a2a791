#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cv2x/engine/engine.hpp"

using namespace cv2x;
using namespace cv2x::engine;

namespace {

RunConfig small_config(int vehicles, double road_km, double speed_kmh, int lanes = 1) {
  RunConfig c;
  c.scheme = "baseline";
  c.dcc.enabled = false;
  c.scenario.name = "custom";
  c.scenario.vehicle_count = vehicles;
  c.scenario.road_length_km = road_km;
  c.scenario.speed_kmh = speed_kmh;
  c.scenario.lanes = lanes;
  c.scenario.wraparound = true;
  return c;
}

RunConfig clean(RunConfig c) {
  c.channel.shadowing_sigma_db = 0.0;
  c.channel.fading = channel::Fading::none;
  return c;
}

}  // namespace

TEST_CASE("single stationary UE sends ten packets per second and nobody decodes") {
  auto c = small_config(1, 0.1, 0.0);
  c.duration_s = 1.0;
  c.warmup_s = 0.0;
  c.log_scope = LogScope::all;
  const auto r = run(c);
  CHECK(r.log.tx.size() == 10);
  for (std::size_t i = 1; i < r.log.tx.size(); ++i) CHECK(r.log.tx[i].subframe - r.log.tx[i - 1].subframe == 100);
  CHECK(std::none_of(r.log.rx.begin(), r.log.rx.end(),
                     [](const RxRecord& x) { return x.status == channel::RxStatus::decoded; }));
  CHECK(r.store.ledger().pairs.empty());
}

TEST_CASE("two UEs on a clean channel hear every packet") {
  auto c = clean(small_config(2, 0.1, 0.0));
  c.duration_s = 20.0;
  c.warmup_s = 10.0;
  c.log_scope = LogScope::all;
  const auto r = run(c);
  const SubframeIndex warm = c.warmup_subframes();
  std::map<std::pair<UeId, UeId>, std::vector<SubframeIndex>> rx;
  std::size_t attempts = 0, blocked = 0;
  for (const auto& x : r.log.rx) {
    const auto& t = r.log.tx[x.tx];
    if (t.subframe < warm || t.subframe >= c.total_subframes()) continue;
    ++attempts;
    CHECK(x.distance_m <= 50.0f);
    if (x.status == channel::RxStatus::half_duplex_blocked) {
      ++blocked;
      continue;
    }
    REQUIRE(x.status == channel::RxStatus::decoded);
    rx[{t.ue, x.receiver}].push_back(t.subframe);
  }
  CHECK(attempts >= 190);
  CHECK(blocked == 0);
  REQUIRE(rx.size() == 2);
  for (const auto& [pair, times] : rx) {
    std::vector<SubframeIndex> gaps;
    for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back(times[i] - times[i - 1]);
    const double mean = static_cast<double>(times.back() - times.front()) / static_cast<double>(gaps.size());
    // Reselections shift the grant inside a 100-subframe window.
    CHECK(mean >= 99.0);
    CHECK(mean <= 103.0);
    std::sort(gaps.begin(), gaps.end());
    CHECK(gaps[gaps.size() * 8 / 10] == 100);
  }
}

TEST_CASE("more UEs than resources collide") {
  auto c = small_config(250, 0.2, 0.0, 12);
  c.duration_s = 3.0;
  c.warmup_s = 1.0;
  c.log_scope = LogScope::all;
  const auto r = run(c);
  const auto collided = std::count_if(r.log.rx.begin(), r.log.rx.end(),
                                      [](const RxRecord& x) { return x.status == channel::RxStatus::collided; });
  CHECK(collided > 0);
}

TEST_CASE("log invariants") {
  auto c = small_config(60, 0.3, 60.0, 4);
  c.scheme = "dcc-std";
  c.dcc.enabled = true;
  c.dcc.rate.density_coefficient = 2.0;  // long ITT, so PTE gets a chance to fire
  c.scenario.perturbation_sigma_mps = 2.0;
  c.duration_s = 4.0;
  c.warmup_s = 1.0;
  c.log_scope = LogScope::all;
  const auto r = run(c);
  REQUIRE(!r.log.tx.empty());
  std::set<std::pair<SubframeIndex, UeId>> seen;
  for (std::size_t i = 0; i < r.log.tx.size(); ++i) {
    const auto& t = r.log.tx[i];
    CHECK(seen.insert({t.subframe, t.ue}).second);
    CHECK(t.subframe > t.generated);
    if (i) CHECK(t.subframe >= r.log.tx[i - 1].subframe);
    CHECK(t.power_dbm <= 23.0);
    CHECK(t.power_dbm >= 10.0);
  }
  for (const auto& x : r.log.rx) {
    REQUIRE(x.tx < r.log.tx.size());
    const auto& t = r.log.tx[x.tx];
    CHECK(x.receiver != t.ue);
    if (seen.count({t.subframe, x.receiver})) CHECK(x.status == channel::RxStatus::half_duplex_blocked);
  }
  CHECK(r.stats.pte_triggers > 0);
}

TEST_CASE("runs are deterministic and seed sensitive") {
  auto c = small_config(40, 0.3, 100.0, 4);
  c.scheme = "dcc-std";
  c.dcc.enabled = true;
  c.duration_s = 3.0;
  c.warmup_s = 1.0;
  const auto a = run(c);
  const auto b = run(c);
  CHECK(a.log.digest() == b.log.digest());
  CHECK(a.log.tx_csv() == b.log.tx_csv());
  CHECK(a.log.rx_csv() == b.log.rx_csv());
  c.seed = 2;
  CHECK(run(c).log.digest() != a.log.digest());
}

TEST_CASE("metrics are a pure function of the log") {
  auto c = small_config(80, 0.3, 50.0, 4);
  c.duration_s = 4.0;
  c.warmup_s = 1.0;
  const auto r = run(c);
  const auto rebuilt = build_store(r.log, c);
  const auto a = metrics::make_report(r.store);
  const auto b = metrics::make_report(rebuilt);
  CHECK(metrics::pdr_csv(a.pdr) == metrics::pdr_csv(b.pdr));
  CHECK(metrics::slt_csv(a.slt) == metrics::slt_csv(b.slt));
  CHECK(metrics::ipg_csv(a.ipg) == metrics::ipg_csv(b.ipg));
  CHECK(metrics::blind_csv(a.blind) == metrics::blind_csv(b.blind));

  std::uint64_t decoded_bytes = 0;
  for (const auto& x : r.log.rx) {
    const auto& t = r.log.tx[x.tx];
    CHECK(t.measured);  // measured scope keeps only measured transmissions
    if (x.status == channel::RxStatus::decoded) decoded_bytes += static_cast<std::uint64_t>(t.bytes);
  }
  std::uint64_t ledger_bytes = 0;
  for (const auto& [k, h] : r.store.ledger().pairs) ledger_bytes += h.bytes;
  CHECK(decoded_bytes == ledger_bytes);
  CHECK(decoded_bytes > 0);
}

TEST_CASE("invalid configs are rejected with every violation") {
  RunConfig c;
  c.warmup_s = 200;
  c.dcc.range.p_min_dbm = 30;
  const auto v = c.violations();
  CHECK(v.size() >= 2);
  CHECK_THROWS_AS(run(c), std::invalid_argument);
}
