#include <doctest.h>

#include <cmath>

#include "cv2x/dcc/dcc.hpp"
#include "cv2x/sps/grant.hpp"
#include "gen.hpp"

using namespace cv2x;
using namespace cv2x::dcc;

namespace {

// Direct transcription of the three-branch rate rule.
double itt_oracle(double n, double b, double itt_max) {
  if (n <= b) return 100.0;
  if (n < itt_max / 100.0 * b) return n / b * 100.0;
  return itt_max;
}

double g_oracle(double cbp, const RangeControlConfig& c) {
  if (cbp < c.u_min_pct) return c.p_max_dbm;
  if (cbp >= c.u_max_pct) return c.p_min_dbm;
  return c.p_min_dbm + (c.u_max_pct - cbp) / (c.u_max_pct - c.u_min_pct) * (c.p_max_dbm - c.p_min_dbm);
}

}  // namespace

TEST_CASE("ITT examples") {
  RateControlConfig c;
  CHECK(compute_itt(0, c) == 100.0);
  CHECK(compute_itt(25, c) == 100.0);
  CHECK(compute_itt(50, c) == 200.0);
  CHECK(compute_itt(149.999, c) == doctest::Approx(599.996));
  CHECK(compute_itt(150, c) == 600.0);
  CHECK(compute_itt(1000, c) == 600.0);
}

TEST_CASE("ITT is monotone, continuous and matches the branch oracle") {
  auto r = testgen::stream(41);
  for (int i = 0; i < 2000; ++i) {
    RateControlConfig c;
    c.density_coefficient = testgen::real(r, 1.0, 80.0);
    c.itt_max_ms = testgen::real(r, 100.0, 1000.0);
    const double a = testgen::real(r, 0.0, 500.0);
    const double b = a + testgen::real(r, 0.0, 50.0);
    CHECK(compute_itt(a, c) == itt_oracle(a, c.density_coefficient, c.itt_max_ms));
    CHECK(compute_itt(a, c) <= compute_itt(b, c));
    CHECK(compute_itt(a, c) >= 100.0);
    CHECK(compute_itt(a, c) <= c.itt_max_ms);
    const double hi = c.itt_max_ms / 100.0 * c.density_coefficient;
    CHECK(compute_itt(hi * (1 - 1e-12), c) == doctest::Approx(c.itt_max_ms));
    CHECK(compute_itt(c.density_coefficient * (1 + 1e-12), c) == doctest::Approx(100.0));
  }
}

TEST_CASE("power update examples") {
  RangeControlConfig c;
  CHECK(update_power(23, 40, c) == 23.0);
  CHECK(update_power(23, 90, c) == 16.5);
  CHECK(power_target(65, c) == doctest::Approx(16.5));
  CHECK(update_power(16.5, 65, c) == doctest::Approx(16.5));
  CHECK(power_target(50, c) == 23.0);
  CHECK(power_target(80, c) == 10.0);
}

TEST_CASE("power update stays in bounds, g is non-increasing, iteration converges") {
  auto r = testgen::stream(42);
  for (int i = 0; i < 2000; ++i) {
    RangeControlConfig c;
    c.p_min_dbm = testgen::real(r, -5.0, 20.0);
    c.p_max_dbm = c.p_min_dbm + testgen::real(r, 0.0, 15.0);
    c.u_min_pct = testgen::real(r, 0.0, 70.0);
    c.u_max_pct = c.u_min_pct + testgen::real(r, 1.0, 30.0);
    const double cbp = testgen::real(r, 0.0, 100.0);
    const double p = testgen::real(r, c.p_min_dbm, c.p_max_dbm);
    const double next = update_power(p, cbp, c);
    CHECK(next >= c.p_min_dbm);
    CHECK(next <= c.p_max_dbm);
    CHECK(power_target(cbp, c) == doctest::Approx(g_oracle(cbp, c)));
    CHECK(power_target(cbp, c) >= power_target(std::min(100.0, cbp + testgen::real(r, 0, 10)), c));
    double it = p;
    for (int k = 0; k < 20; ++k) it = update_power(it, cbp, c);
    CHECK(std::abs(it - g_oracle(cbp, c)) < 1e-4);
  }
}

TEST_CASE("smoothing") {
  CHECK(smooth_density(40, 40) == 40.0);
  CHECK(smooth_density(100, 0) == 50.0);
  double s = 0.0;
  for (int k = 0; k < 20; ++k) s = smooth_density(70.0, s);
  CHECK(std::abs(s - 70.0) < 1e-4 * 70.0);
}

TEST_CASE("CBP measurement") {
  sps::SensingWindow w(1000, 2);
  for (SubframeIndex m = 0; m < 100; ++m) {
    const std::vector<double> rssi{m < 60 ? -80.0 : -98.0, m < 60 ? -80.0 : -98.0};
    w.record(m, rssi, {});
  }
  CHECK(measure_cbp(w, 100, -94.0, 100).value() == doctest::Approx(60.0));
  CHECK(measure_cbp(w, 100, -70.0, 100).value() == 0.0);
  CHECK_FALSE(measure_cbp(w, 500, -94.0, 100).has_value());
  w.record_unsensed(100);
  CHECK(measure_cbp(w, 101, -94.0, 100).value() == doctest::Approx(100.0 * 118 / 198));
  CHECK_THROWS(measure_cbp(w, 100, -94.0, 2000));
}

TEST_CASE("CBP matches a direct count on random windows") {
  auto r = testgen::stream(43);
  for (int i = 0; i < 2000; ++i) {
    sps::SensingWindow w(200, 2);
    const SubframeIndex n = testgen::integer(r, 50, 400);
    std::vector<std::array<double, 2>> table(static_cast<std::size_t>(n));
    std::vector<int> state(static_cast<std::size_t>(n));
    for (SubframeIndex m = 0; m < n; ++m) {
      const double a = testgen::real(r, -100.0, -80.0), b = testgen::real(r, -100.0, -80.0);
      table[m] = {a, b};
      state[m] = testgen::coin(r, 0.1) ? 0 : (testgen::coin(r, 0.1) ? 2 : 1);
      if (state[m] == 1) w.record(m, std::vector<double>{a, b}, {});
      if (state[m] == 2) w.record_unsensed(m);
    }
    const int window = testgen::integer(r, 1, 200);
    const double th = -94.0;
    long busy = 0, sensed = 0;
    for (SubframeIndex m = std::max<SubframeIndex>(0, n - window); m < n; ++m) {
      if (state[m] != 1 || m < n - 200) continue;
      for (double v : table[m]) {
        ++sensed;
        busy += v > th;
      }
    }
    const auto got = measure_cbp(w, n, th, window);
    if (sensed == 0) {
      CHECK_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      CHECK(*got == 100.0 * busy / sensed);
      CHECK(*got >= 0.0);
      CHECK(*got <= 100.0);
    }
  }
}

TEST_CASE("neighbor counting") {
  std::vector<Position> p{{0, 0}};
  CHECK(count_neighbors(0, p, 100) == 0);
  p = {{0, 0}, {50, 0}, {99, 0}, {101, 0}, {100, 0}};
  CHECK(count_neighbors(0, std::span<const Position>(p.data(), 4), 100) == 2);
  CHECK(count_neighbors(0, p, 100) == 3);
  CHECK_THROWS(count_neighbors(0, p, 0));
}

TEST_CASE("neighbor count on a uniform line is about 200 rho") {
  auto r = testgen::stream(44);
  const double length = 2000.0, rho = 0.1;
  const int n = static_cast<int>(length * rho);
  double total = 0.0;
  int samples = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<Position> p(n);
    for (auto& q : p) q = {r.uniform() * length, 0};
    for (int h = 0; h < n; ++h) {
      if (p[h].x < 100.0 || p[h].x > length - 100.0) continue;
      total += count_neighbors(h, p, 100.0);
      ++samples;
    }
  }
  // Conditional on the host, the other n-1 points are uniform: mean (n-1)*200/L.
  const double expected = (n - 1) * 200.0 / length;
  CHECK(std::abs(total / samples - expected) / expected < 0.05);
  CHECK(std::abs(total / samples - 200 * rho) / (200 * rho) < 0.05);
}

TEST_CASE("position tracking error") {
  BroadcastState b{{10, 0}, {20, 0}, 1000};
  CHECK(update_pte({{30, 0}, {20, 0}}, b, 2000) == doctest::Approx(0.0));
  CHECK(update_pte({{1, 0}, {0, 0}}, BroadcastState{{0, 0}, {0, 0}, 0}, 500) == doctest::Approx(1.0));
  // Decelerating at 1 m/s^2 for 1 s from 20 m/s.
  const double x = 10 + 20 * 1.0 - 0.5 * 1.0;
  CHECK(update_pte({{x, 0}, {19, 0}}, b, 2000) == doctest::Approx(0.5));
  CHECK_THROWS(update_pte({{0, 0}, {0, 0}}, b, 999));
}

TEST_CASE("transmit decision") {
  RateControlConfig c;
  DccState s;
  CHECK(should_transmit(s, 0.0, 0, c));
  s.itt_ms = 300;
  s.last_tx_time = 1000;
  CHECK(should_transmit(s, 0.0, 1300, c));
  CHECK(should_transmit(s, 0.6, 1100, c));
  CHECK_FALSE(should_transmit(s, 0.4, 1100, c));
  CHECK_FALSE(should_transmit(s, 0.5, 1299, c));
}

TEST_CASE("scheme presets") {
  const auto std_ = scheme_preset("dcc-std").value();
  CHECK(std_.dcc.enabled);
  CHECK(std_.dcc.rate.density_coefficient == 25);
  CHECK(std_.dcc.rate.itt_max_ms == 600);
  CHECK(std_.dcc.range.eta == 0.5);
  CHECK(std_.dcc.range.p_min_dbm == 10);
  CHECK(std_.dcc.range.p_max_dbm == 23);
  CHECK(std_.dcc.range.u_min_pct == 50);
  CHECK(std_.dcc.range.u_max_pct == 80);
  CHECK(std_.dcc.rate.pte_threshold_m == 0.5);
  CHECK_FALSE(std_.slrrc_range.has_value());

  struct Row {
    const char* name;
    double p_max, p_min, u_max, u_min, b;
  };
  const Row rows[] = {
      {"dcc-1", 23, 23, 80, 50, 25}, {"dcc-2", 23, 10, 50, 30, 25}, {"dcc-3", 23, 5, 50, 30, 25},
      {"dcc-4", 23, 5, 50, 30, 35},  {"dcc-5", 23, 5, 50, 30, 45},  {"dcc-6", 23, 5, 50, 30, 55},
      {"dcc-7", 23, 0, 50, 30, 45},
  };
  for (const auto& row : rows) {
    CAPTURE(row.name);
    const auto p = scheme_preset(row.name).value();
    CHECK(p.dcc.range.p_max_dbm == row.p_max);
    CHECK(p.dcc.range.p_min_dbm == row.p_min);
    CHECK(p.dcc.range.u_max_pct == row.u_max);
    CHECK(p.dcc.range.u_min_pct == row.u_min);
    CHECK(p.dcc.rate.density_coefficient == row.b);
    CHECK(p.dcc.rate.itt_max_ms == 600);
    CHECK(p.dcc.range.eta == 0.5);
    CHECK_NOTHROW(p.dcc.validate());
  }
  const auto d7 = scheme_preset("dcc-7").value();
  REQUIRE(d7.slrrc_range.has_value());
  CHECK(d7.slrrc_range->first == 1);
  CHECK(d7.slrrc_range->second == 5);
  CHECK(d7.p_resel.value() == 0.2);
  CHECK_FALSE(scheme_preset("baseline")->dcc.enabled);
  CHECK_FALSE(scheme_preset("dcc-8").has_value());
  CHECK(scheme_names().size() == 9);
}

TEST_CASE("config validation") {
  DccConfig c;
  CHECK_NOTHROW(c.validate());
  c.range.p_min_dbm = 30;
  CHECK_THROWS(c.validate());
  c = DccConfig{};
  c.rate.itt_max_ms = 50;
  CHECK_THROWS(c.validate());
  c = DccConfig{};
  c.range.eta = 0;
  CHECK_THROWS(c.validate());
}
