// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cv2x/cli/config.hpp"
#include "cv2x/cli/runner.hpp"
#include "cv2x/dcc/dcc.hpp"
#include "cv2x/engine/engine.hpp"
#include "cv2x/sps/occupancy.hpp"
#include "cv2x/sps/selection.hpp"
#include "gen.hpp"
#include "metric_goldens.hpp"
#include "oracles.hpp"

using namespace cv2x;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr int kSeeds = 5;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

engine::RunConfig config(const std::string& scenario, const std::string& scheme, std::uint64_t seed,
                         std::vector<std::string> overrides = {}) {
  cli::LoadRequest req;
  req.scenario = scenario;
  req.scheme = scheme;
  req.seed = seed;
  req.overrides = std::move(overrides);
  return cli::load(req);
}

struct Steady {
  double cbp = 0.0, itt = 0.0, power = 0.0;
};

Steady steady_state(const engine::RunResult& r, double warmup_s) {
  Steady s;
  int n = 0;
  for (const auto& t : r.timeseries) {
    if (t.t_s < warmup_s) continue;
    s.cbp += t.mean_cbp_pct;
    s.itt += t.mean_itt_ms;
    s.power += t.mean_power_dbm;
    ++n;
  }
  if (n) {
    s.cbp /= n;
    s.itt /= n;
    s.power /= n;
  }
  return s;
}

Outcome c1() {
  dcc::RateControlConfig c;  // B 25, ITT max 600 ms
  int mismatches = 0;
  for (int n = 0; n <= 500; ++n) {
    double want;
    if (n <= 25) {
      want = 100.0;
    } else if (n < 150) {
      want = n / 25.0 * 100.0;
    } else {
      want = 600.0;
    }
    if (dcc::compute_itt(n, c) != want) ++mismatches;
  }
  const bool bounds = dcc::compute_itt(25, c) == 100.0 && dcc::compute_itt(150, c) == 600.0;
  return {mismatches == 0 && bounds,
          std::to_string(mismatches) + " mismatches over N in [0, 500]; ITT(25)=" + fmt("%g", dcc::compute_itt(25, c)) +
              ", ITT(150)=" + fmt("%g", dcc::compute_itt(150, c))};
}

Outcome c2() {
  dcc::RangeControlConfig c;
  // g by hand: below 50% -> 23; 50% -> 10 + 1.0 * 13; 65% -> 10 + 0.5 * 13; at or above 80% -> 10.
  const std::vector<std::pair<double, double>> g{{40, 23.0}, {50, 23.0}, {65, 16.5}, {80, 10.0}, {90, 10.0}};
  double worst = 0.0;
  int slowest = 0;
  for (const auto& [cbp, target] : g) {
    worst = std::max(worst, std::abs(dcc::power_target(cbp, c) - target));
    worst = std::max(worst, std::abs(dcc::update_power(23.0, cbp, c) - (23.0 + 0.5 * (target - 23.0))));
    for (double start : {c.p_min_dbm, c.p_max_dbm}) {
      double p = start;
      int k = 0;
      while (std::abs(p - target) >= 1e-4 && k < 100) {
        p = dcc::update_power(p, cbp, c);
        ++k;
      }
      slowest = std::max(slowest, k);
    }
  }
  return {worst <= 1e-9 && slowest <= 20,
          "max error " + fmt("%.3g", worst) + " dBm; convergence within 1e-4 dBm after at most " +
              std::to_string(slowest) + " steps"};
}

Outcome c3() {
  auto r = testgen::stream(3003);
  int mismatches = 0, escalated = 0, released = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto in = oracle::random_instance(r);
    const auto got = sps::candidate_set(in.window, in.n, in.cfg);
    const auto want = oracle::brute_force(in);
    auto kept = got.kept;
    std::sort(kept.begin(), kept.end());
    if (kept != want.kept || got.escalations != want.escalations) ++mismatches;
    escalated += got.escalations > 0;
    released += got.unsensed_released;
  }
  return {mismatches == 0 && escalated > 0, std::to_string(mismatches) + " mismatches in 1000 instances (" +
                                                std::to_string(escalated) + " with 3 dB escalation, " +
                                                std::to_string(released) + " with unsensed release)"};
}

Outcome c4() {
  auto r = testgen::stream(4004);
  int cr_bad = 0, cbp_bad = 0, out_of_range = 0;
  const int cases = 10000;
  for (int i = 0; i < cases; ++i) {
    // CR on a random occupancy table.
    const int subch = testgen::integer(r, 1, 4);
    const SubframeIndex span = testgen::integer(r, 10, 200);
    const SubframeIndex origin = testgen::integer(r, 0, 1000);
    const auto length = static_cast<std::size_t>(span + testgen::integer(r, 0, 50));
    sps::OccupancyTable t(origin, length, subch);
    std::vector<std::vector<int>> pool(length, std::vector<int>(static_cast<std::size_t>(subch)));
    std::vector<std::vector<int>> used = pool;
    const double p_pool = testgen::real(r, 0.3, 1.0), p_used = r.uniform();
    for (std::size_t j = 0; j < length; ++j) {
      for (int s = 0; s < subch; ++s) {
        const bool in_pool = testgen::coin(r, p_pool), u = testgen::coin(r, p_used);
        t.set_pool(origin + static_cast<SubframeIndex>(j), s, in_pool);
        t.set_used(origin + static_cast<SubframeIndex>(j), s, u);
        pool[j][static_cast<std::size_t>(s)] = in_pool;
        used[j][static_cast<std::size_t>(s)] = u;
      }
    }
    const SubframeIndex tau1 = origin + testgen::integer(r, 0, static_cast<int>(length - static_cast<std::size_t>(span)));
    const SubframeIndex tau2 = tau1 + span;
    const SubframeIndex n = tau1 + span / 2 + 1 + testgen::integer(r, 0, static_cast<int>(span));
    bool any_pool = false;
    for (SubframeIndex j = tau1; j < tau2; ++j)
      for (int s = 0; s < subch; ++s) any_pool |= pool[static_cast<std::size_t>(j - origin)][static_cast<std::size_t>(s)];
    if (any_pool) {
      const double got = sps::compute_cr(n, t, tau1, tau2, span);
      if (got != oracle::cr_count(pool, used, origin, tau1, tau2)) ++cr_bad;
      if (got < 0.0 || got > 1.0) ++out_of_range;
    }

    // CBP on a random sensing window.
    sps::SensingWindow w(static_cast<int>(span), subch);
    const SubframeIndex now = testgen::integer(r, 1, 400);
    std::map<SubframeIndex, std::vector<double>> sensed;
    for (SubframeIndex m = std::max<SubframeIndex>(0, now - span - 5); m < now; ++m) {
      const double u = r.uniform();
      if (u < 0.05) continue;
      if (u < 0.15) {
        w.record_unsensed(m);
        sensed.erase(m);
        continue;
      }
      std::vector<double> v(static_cast<std::size_t>(subch));
      for (auto& x : v) x = testgen::pick(r, std::vector<double>{-98.0, -94.0, -93.9, -85.0, -70.0});
      w.record(m, v, {});
      sensed[m] = v;
    }
    const int window = testgen::integer(r, 1, static_cast<int>(span));
    const SubframeIndex oldest = now - 1 - span + 1;
    long busy = 0, total = 0;
    for (const auto& [m, v] : sensed) {
      if (m < now - window || m < oldest) continue;
      for (double x : v) {
        ++total;
        busy += x > -94.0;
      }
    }
    const auto got = dcc::measure_cbp(w, now, -94.0, window);
    if (total == 0) {
      if (got) ++cbp_bad;
    } else if (!got || *got != 100.0 * static_cast<double>(busy) / static_cast<double>(total)) {
      ++cbp_bad;
    } else if (*got < 0.0 || *got > 100.0) {
      ++out_of_range;
    }
  }
  return {cr_bad == 0 && cbp_bad == 0 && out_of_range == 0,
          std::to_string(cr_bad) + " CR and " + std::to_string(cbp_bad) + " CBP mismatches, " +
              std::to_string(out_of_range) + " out of range, over " + std::to_string(cases) + " cases each"};
}

Outcome c5() {
  const std::vector<std::string> o{"run.duration_s=20", "run.warmup_s=5"};
  const auto base = engine::run(config("sparse-ring", "baseline", 1, o));
  const auto cfg = config("sparse-ring", "dcc-std", 1, o);
  const auto dcc = engine::run(cfg);
  auto trace = [](const engine::RunResult& r) {
    std::vector<std::tuple<SubframeIndex, UeId, int, double>> t;
    for (const auto& e : r.log.tx) t.emplace_back(e.subframe, e.ue, e.subchannel, e.power_dbm);
    return t;
  };
  double max_cbp = 0.0, max_itt = 0.0;
  for (const auto& s : dcc.timeseries) {
    max_cbp = std::max(max_cbp, s.mean_cbp_pct);
    max_itt = std::max(max_itt, s.mean_itt_ms);
  }
  const bool same = trace(base) == trace(dcc);
  return {same && max_cbp < 50.0 && cfg.scenario.resolved_vehicle_count() <= 40,
          std::string(same ? "identical" : "different") + " traces (" + std::to_string(dcc.log.tx.size()) +
              " transmissions, " + std::to_string(cfg.scenario.resolved_vehicle_count()) + " vehicles); max mean CBP " +
              fmt("%.1f", max_cbp) + "%, max mean ITT " + fmt("%g", max_itt) + " ms"};
}

Outcome c6() {
  int worst = 1 << 30;
  int seconds_without = 0;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    auto c = config("custom", "baseline", seed,
                    {"scenario.vehicle_count=250", "scenario.road_length_km=0.2", "scenario.lanes=12",
                     "scenario.speed_kmh=0", "scenario.wraparound=true", "run.duration_s=15", "run.warmup_s=10",
                     "log.scope=all"});
    const auto r = engine::run(c);
    std::map<SubframeIndex, int> per_second;
    for (SubframeIndex s = c.warmup_subframes() / 1000; s < c.total_subframes() / 1000; ++s) per_second[s] = 0;
    for (const auto& x : r.log.rx) {
      if (x.status != channel::RxStatus::collided) continue;
      const auto t = r.log.tx[x.tx].subframe;
      if (t < c.warmup_subframes() || t >= c.total_subframes()) continue;
      ++per_second[t / 1000];
    }
    for (const auto& [s, n] : per_second) {
      worst = std::min(worst, n);
      seconds_without += n == 0;
    }
  }
  return {seconds_without == 0, std::to_string(seconds_without) + " post-warmup seconds without a collision over " +
                                    std::to_string(kSeeds) + " seeds; fewest collided outcomes in a second: " +
                                    std::to_string(worst)};
}

struct DenseRuns {
  std::vector<engine::RunResult> baseline, dcc_std, dcc_b45;
  double warmup_s = 0.0;
};

const DenseRuns& dense_runs() {
  static const DenseRuns runs = [] {
    DenseRuns d;
    const std::vector<std::string> o{"run.duration_s=20"};
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      const auto cb = config("dense-ring", "baseline", seed, o);
      d.warmup_s = cb.warmup_s;
      d.baseline.push_back(engine::run(cb));
      d.dcc_std.push_back(engine::run(config("dense-ring", "dcc-std", seed, o)));
      auto o45 = o;
      o45.push_back("dcc.density_coefficient=45");
      d.dcc_b45.push_back(engine::run(config("dense-ring", "dcc-std", seed, o45)));
      for (auto* v : {&d.baseline, &d.dcc_std, &d.dcc_b45}) v->back().log = {};
    }
    return d;
  }();
  return runs;
}

Outcome c7() {
  const auto& d = dense_runs();
  bool a = true, b = true;
  int c_votes = 0;
  std::string itts, cbps, best_gains;
  for (int i = 0; i < kSeeds; ++i) {
    const auto sb = steady_state(d.baseline[i], d.warmup_s);
    const auto sd = steady_state(d.dcc_std[i], d.warmup_s);
    a &= sd.itt == 600.0;
    b &= sb.cbp >= 90.0 && sd.cbp < sb.cbp;
    const auto g = metrics::gains(metrics::make_report(d.dcc_std[i].store), metrics::make_report(d.baseline[i].store));
    double best = -1e9;
    for (const auto& row : g)
      if (row.lo_m >= 150.0) best = std::max(best, row.pdr_gain_pp);
    c_votes += best >= 10.0;
    itts += (i ? "/" : "") + fmt("%.1f", sd.itt);
    cbps += (i ? " " : "") + fmt("%.1f", sb.cbp) + "->" + fmt("%.1f", sd.cbp);
    best_gains += (i ? "/" : "") + fmt("%.1f", best);
  }
  const bool c = 2 * c_votes > kSeeds;
  return {a && b && c, std::string("(a) ") + (a ? "PASS" : "FAIL") + " mean ITT " + itts + " ms, want 600; (b) " +
                           (b ? "PASS" : "FAIL") + " CBP baseline->dcc " + cbps + " %; (c) " + (c ? "PASS" : "FAIL") +
                           " best PDR gain beyond 150 m " + best_gains + " pp, " + std::to_string(c_votes) + "/" +
                           std::to_string(kSeeds) + " seeds >= 10"};
}

double near_slt(const metrics::MetricsStore& s) {
  double sum = 0.0;
  int n = 0;
  for (const auto& b : metrics::slt(s.bins(), s.observation_s())) {
    if (b.hi_m > 50.0) continue;
    sum += b.value;
    ++n;
  }
  return n ? sum / n : 0.0;
}

Outcome c8() {
  const auto& d = dense_runs();
  int votes = 0;
  std::string detail;
  for (int i = 0; i < kSeeds; ++i) {
    const auto s25 = steady_state(d.dcc_std[i], d.warmup_s);
    const auto s45 = steady_state(d.dcc_b45[i], d.warmup_s);
    const double slt25 = near_slt(d.dcc_std[i].store), slt45 = near_slt(d.dcc_b45[i].store);
    votes += s45.itt < s25.itt && slt45 > slt25;
    detail += (i ? "; " : "") + fmt("ITT %.0f", s25.itt) + fmt("->%.0f ms", s45.itt) + fmt(", SLT %.0f", slt25) +
              fmt("->%.0f B/s", slt45);
  }
  return {2 * votes > kSeeds, std::to_string(votes) + "/" + std::to_string(kSeeds) + " seeds (B 25->45: " + detail + ")"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c9() {
  const auto root = fs::temp_directory_path() / "cv2x_acceptance_c9";
  fs::remove_all(root);
  const auto cfg = config("freeway-high-mini", "dcc-std", 9, {"run.duration_s=10", "run.warmup_s=2"});
  cli::run_to_dir(cfg, root / "a", true);
  cli::LoadRequest again;
  again.file = root / "a" / "manifest.ini";
  const auto replay = cli::load(again);
  cli::run_to_dir(replay, root / "b", true);
  int differing = 0, files = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    ++files;
    if (slurp(e.path()) != slurp(root / "b" / e.path().filename())) ++differing;
  }
  auto other = cfg;
  other.seed = 10;
  const auto d1 = engine::run(cfg).log.digest();
  const auto d2 = engine::run(other).log.digest();
  fs::remove_all(root);
  return {differing == 0 && files >= 9 && d1 != d2,
          std::to_string(differing) + " of " + std::to_string(files) + " files differ on replay; seed change " +
              (d1 != d2 ? "changes" : "does not change") + " the event log"};
}

Outcome c10() {
  const auto failures = goldens::check_all();
  std::string detail = std::to_string(failures.size()) + " failed golden checks";
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, 1, c1}, {2, 1, c2}, {3, 60, c3}, {4, 10, c4}, {5, 120, c5},
      {6, 300, c6}, {7, 900, c7}, {8, 900, c8}, {9, 120, c9}, {10, 10, c10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %2d: %s  %s [%.2f s of %.0f s]\n", c.id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                c.budget_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
