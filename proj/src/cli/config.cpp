#include "cv2x/cli/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cv2x::cli {

namespace {

using engine::RunConfig;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct BadValue {
  std::string expected;
};

double parse_double(std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size()) throw BadValue{"a number"};
  return v;
}

std::int64_t parse_int(std::string_view s) {
  const std::string t = trim(s);
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size()) throw BadValue{"an integer"};
  return v;
}

bool parse_bool(std::string_view s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw BadValue{"true or false"};
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

template <typename E>
struct EnumNames {
  std::vector<std::pair<E, const char*>> names;

  E parse(std::string_view s) const {
    const std::string t = trim(s);
    for (const auto& [e, n] : names)
      if (t == n) return e;
    std::string expected = "one of";
    for (const auto& [e, n] : names) expected += std::string(" ") + n;
    throw BadValue{expected};
  }
  std::string name(E e) const {
    for (const auto& [v, n] : names)
      if (v == e) return n;
    return "?";
  }
};

const EnumNames<channel::ShadowingMode> kShadowing{{{channel::ShadowingMode::iid, "iid"},
                                                    {channel::ShadowingMode::per_pair, "per_pair"}}};
const EnumNames<channel::Fading> kFading{{{channel::Fading::none, "none"}, {channel::Fading::nakagami, "nakagami"}}};
const EnumNames<sps::RssiAveraging> kAveraging{{{sps::RssiAveraging::linear, "linear"}, {sps::RssiAveraging::db, "db"}}};
const EnumNames<sps::UnsensedPolicy> kUnsensed{{{sps::UnsensedPolicy::exclude, "exclude"},
                                                {sps::UnsensedPolicy::silent, "silent"}}};
const EnumNames<sps::TieBreak> kTieBreak{{{sps::TieBreak::random, "random"}, {sps::TieBreak::index, "index"}}};
const EnumNames<metrics::PdrAveraging> kPdr{{{metrics::PdrAveraging::pair, "pair"},
                                             {metrics::PdrAveraging::pooled, "pooled"}}};
const EnumNames<engine::LogScope> kScope{{{engine::LogScope::measured, "measured"}, {engine::LogScope::all, "all"}}};

struct Entry {
  KeyInfo info;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

template <typename Ref>
Entry number(std::string sec, std::string key, std::string doc, Ref ref) {
  return {{std::move(sec), std::move(key), std::move(doc)},
          [ref](const RunConfig& c) { return fmt(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, std::string_view v) { ref(c) = parse_double(v); }};
}

template <typename Ref>
Entry integer(std::string sec, std::string key, std::string doc, Ref ref) {
  return {{std::move(sec), std::move(key), std::move(doc)},
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, std::string_view v) {
            using T = std::remove_reference_t<decltype(ref(c))>;
            const auto x = parse_int(v);
            if constexpr (std::is_unsigned_v<T>) {
              if (x < 0) throw BadValue{"a non-negative integer"};
            }
            ref(c) = static_cast<T>(x);
          }};
}

template <typename Ref>
Entry boolean(std::string sec, std::string key, std::string doc, Ref ref) {
  return {{std::move(sec), std::move(key), std::move(doc)},
          [ref](const RunConfig& c) { return fmt_bool(ref(const_cast<RunConfig&>(c))); },
          [ref](RunConfig& c, std::string_view v) { ref(c) = parse_bool(v); }};
}

template <typename E, typename Ref>
Entry enumerated(std::string sec, std::string key, std::string doc, const EnumNames<E>& names, Ref ref) {
  return {{std::move(sec), std::move(key), std::move(doc)},
          [ref, &names](const RunConfig& c) { return names.name(ref(const_cast<RunConfig&>(c))); },
          [ref, &names](RunConfig& c, std::string_view v) { ref(c) = names.parse(v); }};
}

#define REF(expr) [](RunConfig& c) -> auto& { return c.expr; }

std::vector<Entry> build_entries() {
  std::vector<Entry> e;
  e.push_back({{"run", "scenario", "scenario preset name, or custom"},
               [](const RunConfig& c) { return c.scenario.name; },
               [](RunConfig& c, std::string_view v) { apply_scenario(c, trim(v)); }});
  e.push_back({{"run", "scheme", "DCC scheme preset name"},
               [](const RunConfig& c) { return c.scheme; },
               [](RunConfig& c, std::string_view v) { apply_scheme(c, trim(v)); }});
  e.push_back(integer("run", "seed", "master seed", REF(seed)));
  e.push_back(number("run", "duration_s", "simulated time", REF(duration_s)));
  e.push_back(number("run", "warmup_s", "initial time excluded from metrics", REF(warmup_s)));
  e.push_back(integer("run", "subchannels", "subchannels per subframe", REF(subchannels)));
  e.push_back(integer("run", "payload_bytes", "application payload", REF(payload_bytes)));
  e.push_back(integer("run", "mcs_index", "modulation and coding scheme index", REF(mcs_index)));
  e.push_back(integer("run", "mobility_tick_ms", "mobility update interval", REF(mobility_tick_ms)));
  e.push_back(integer("run", "timeseries_interval_ms", "control-variable sampling interval", REF(timeseries_interval_ms)));

  e.push_back(integer("scenario", "vehicle_count", "0 derives the count from the density", REF(scenario.vehicle_count)));
  e.push_back(number("scenario", "density_veh_per_km_lane", "vehicles per km per lane", REF(scenario.density_veh_per_km_lane)));
  e.push_back(number("scenario", "speed_kmh", "nominal speed", REF(scenario.speed_kmh)));
  e.push_back(number("scenario", "road_length_km", "road length", REF(scenario.road_length_km)));
  e.push_back(integer("scenario", "lanes", "lanes, split evenly between directions", REF(scenario.lanes)));
  e.push_back(number("scenario", "lane_width_m", "lane width", REF(scenario.lane_width_m)));
  e.push_back(boolean("scenario", "wraparound", "ring road distances", REF(scenario.wraparound)));
  e.push_back(number("scenario", "perturbation_sigma_mps", "speed perturbation, 0 disables", REF(scenario.perturbation_sigma_mps)));
  e.push_back(number("scenario", "perturbation_reversion_per_s", "speed mean reversion rate", REF(scenario.perturbation_reversion_per_s)));

  e.push_back(number("channel", "reference_distance_m", "", REF(channel.reference_distance_m)));
  e.push_back(number("channel", "reference_loss_db", "path loss at the reference distance", REF(channel.reference_loss_db)));
  e.push_back(number("channel", "pathloss_exponent", "", REF(channel.pathloss_exponent)));
  e.push_back(number("channel", "breakpoint_m", "second-slope breakpoint, 0 disables", REF(channel.breakpoint_m)));
  e.push_back(number("channel", "pathloss_exponent_far", "exponent beyond the breakpoint", REF(channel.pathloss_exponent_far)));
  e.push_back(number("channel", "shadowing_sigma_db", "", REF(channel.shadowing_sigma_db)));
  e.push_back(enumerated("channel", "shadowing_mode", "iid or per_pair", kShadowing, REF(channel.shadowing_mode)));
  e.push_back(enumerated("channel", "fading", "none or nakagami", kFading, REF(channel.fading)));
  e.push_back(number("channel", "nakagami_m", "", REF(channel.nakagami_m)));
  e.push_back(number("channel", "noise_floor_dbm", "", REF(channel.noise_floor_dbm)));
  e.push_back(number("channel", "sensitivity_dbm", "", REF(channel.sensitivity_dbm)));
  e.push_back(number("channel", "sinr_threshold_db", "decoding threshold", REF(channel.sinr_threshold_db)));

  e.push_back(integer("sps", "t1_ms", "selection window start", REF(sps.t1)));
  e.push_back(integer("sps", "t2_ms", "selection window end", REF(sps.t2)));
  e.push_back(number("sps", "th_sps_dbm", "RSRP exemption threshold", REF(sps.th_sps_dbm)));
  e.push_back(integer("sps", "slrrc_min", "", REF(sps.slrrc_min)));
  e.push_back(integer("sps", "slrrc_max", "", REF(sps.slrrc_max)));
  e.push_back(number("sps", "p_resel", "probability of changing the reservation", REF(sps.p_resel)));
  e.push_back(integer("sps", "sensing_window_ms", "", REF(sps.sensing_window)));
  e.push_back(number("sps", "keep_fraction", "share of candidates that must survive", REF(sps.keep_fraction)));
  e.push_back(number("sps", "escalation_step_db", "", REF(sps.escalation_step_db)));
  e.push_back(enumerated("sps", "rssi_averaging", "linear or db", kAveraging, REF(sps.rssi_averaging)));
  e.push_back(enumerated("sps", "unsensed_policy", "exclude or silent", kUnsensed, REF(sps.unsensed_policy)));
  e.push_back({{"sps", "unsensed_periods_ms", "comma-separated periods projected from unsensed subframes"},
               [](const RunConfig& c) {
                 std::string s;
                 for (std::size_t i = 0; i < c.sps.unsensed_periods_ms.size(); ++i)
                   s += (i ? "," : "") + std::to_string(c.sps.unsensed_periods_ms[i]);
                 return s;
               },
               [](RunConfig& c, std::string_view v) {
                 std::vector<int> out;
                 std::string item;
                 std::istringstream is{std::string(v)};
                 while (std::getline(is, item, ',')) out.push_back(static_cast<int>(parse_int(item)));
                 c.sps.unsensed_periods_ms = std::move(out);
               }});
  e.push_back(integer("sps", "rssi_projection_period_ms", "", REF(sps.rssi_projection_period_ms)));
  e.push_back(enumerated("sps", "tie_break", "random or index", kTieBreak, REF(sps.tie_break)));

  e.push_back(boolean("dcc", "enabled", "false runs the baseline", REF(dcc.enabled)));
  e.push_back(number("dcc", "density_coefficient", "B, vehicles", REF(dcc.rate.density_coefficient)));
  e.push_back(number("dcc", "itt_max_ms", "", REF(dcc.rate.itt_max_ms)));
  e.push_back(number("dcc", "smoothing", "density smoothing factor", REF(dcc.rate.smoothing)));
  e.push_back(number("dcc", "neighbor_radius_m", "", REF(dcc.rate.neighbor_radius_m)));
  e.push_back(number("dcc", "pte_threshold_m", "", REF(dcc.rate.pte_threshold_m)));
  e.push_back(number("dcc", "p_min_dbm", "", REF(dcc.range.p_min_dbm)));
  e.push_back(number("dcc", "p_max_dbm", "", REF(dcc.range.p_max_dbm)));
  e.push_back(number("dcc", "u_min_pct", "", REF(dcc.range.u_min_pct)));
  e.push_back(number("dcc", "u_max_pct", "", REF(dcc.range.u_max_pct)));
  e.push_back(number("dcc", "eta", "power loop gain", REF(dcc.range.eta)));
  e.push_back(integer("dcc", "density_interval_ms", "", REF(dcc.density_interval_ms)));
  e.push_back(integer("dcc", "power_interval_ms", "", REF(dcc.power_interval_ms)));
  e.push_back(integer("dcc", "cbp_window_ms", "", REF(dcc.cbp_window_ms)));
  e.push_back(number("dcc", "cbp_rssi_threshold_dbm", "", REF(dcc.cbp_rssi_threshold_dbm)));
  e.push_back(boolean("dcc", "pte_enabled", "", REF(dcc.pte_enabled)));
  e.push_back(integer("dcc", "pte_grant_wait_ms", "", REF(dcc.pte_grant_wait_ms)));
  e.push_back(number("dcc", "baseline_itt_ms", "", REF(dcc.baseline_itt_ms)));
  e.push_back(number("dcc", "baseline_power_dbm", "", REF(dcc.baseline_power_dbm)));
  e.push_back(boolean("dcc", "cr_limit_enabled", "", REF(dcc.cr_limit.enabled)));
  e.push_back(number("dcc", "cbp_limit_pct", "", REF(dcc.cr_limit.cbp_limit_pct)));
  e.push_back({{"dcc", "cr_calibration", "cbp:vehicles pairs"},
               [](const RunConfig& c) { return c.dcc.cr_limit.calibration.to_string(); },
               [](RunConfig& c, std::string_view v) {
                 try {
                   c.dcc.cr_limit.calibration = sps::CalibrationTable::parse(v);
                 } catch (const std::invalid_argument& ex) {
                   throw BadValue{std::string("cbp:vehicles pairs (") + ex.what() + ")"};
                 }
               }});

  e.push_back(number("metrics", "bin_width_m", "", REF(metrics.bin_width_m)));
  e.push_back(number("metrics", "max_distance_m", "", REF(metrics.max_distance_m)));
  e.push_back(number("metrics", "roi_radius_m", "blind-node region of interest", REF(metrics.roi_radius_m)));
  e.push_back(enumerated("metrics", "pdr_averaging", "pair or pooled", kPdr, REF(metrics.pdr_averaging)));

  e.push_back(enumerated("log", "scope", "measured or all", kScope, REF(log_scope)));
  return e;
}

#undef REF

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = build_entries();
  return e;
}

const Entry* find(std::string_view section, std::string_view key) {
  for (const auto& e : entries())
    if (e.info.section == section && e.info.key == key) return &e;
  return nullptr;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string unknown_key_message(std::string_view section, std::string_view key) {
  std::string msg = "unknown key '" + std::string(section) + "." + std::string(key) + "'";
  const std::string s = suggest_key(section, key);
  if (!s.empty()) msg += " (did you mean '" + s + "'?)";
  return msg;
}

void set_checked(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
  const Entry* e = find(section, key);
  if (!e) throw ConfigError(unknown_key_message(section, key));
  try {
    e->set(cfg, value);
  } catch (const BadValue& bad) {
    throw ConfigError("bad value '" + trim(value) + "' for " + e->info.dotted() + ": expected " + bad.expected);
  }
}

/// Line of `key` inside `[section]`, 0 if not found.
int line_of(const std::string& text, const std::string& section, const std::string& key) {
  std::istringstream is(text);
  std::string line, current;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t[0] == '[') {
      current = trim(t.substr(1, t.find(']') - 1));
      continue;
    }
    const auto eq = t.find('=');
    if (eq != std::string::npos && current == section && trim(t.substr(0, eq)) == key) return no;
  }
  return 0;
}

std::pair<std::string, std::string> split_dotted(std::string_view dotted) {
  const auto dot = dotted.find('.');
  if (dot == std::string_view::npos) return {"", std::string(dotted)};
  return {trim(dotted.substr(0, dot)), trim(dotted.substr(dot + 1))};
}

}  // namespace

const std::vector<KeyInfo>& schema() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> k;
    for (const auto& e : entries()) k.push_back(e.info);
    return k;
  }();
  return keys;
}

std::string suggest_key(std::string_view section, std::string_view key) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& e : entries()) {
    // A key missing only its unit suffix counts as one edit; same-section
    // keys win ties.
    std::size_t edits = levenshtein(key, e.info.key);
    if (!key.empty() && e.info.key.starts_with(key)) edits = std::min<std::size_t>(edits, 1);
    const std::size_t d = 2 * edits + (e.info.section == section ? 0 : 1);
    if (d < best_d) {
      best_d = d;
      best = e.info.dotted();
    }
  }
  return best_d <= 2 * std::max<std::size_t>(2, key.size() / 2) + 1 ? best : std::string();
}

void set_key(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
  set_checked(cfg, section, key, value);
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("override '" + std::string(assignment) + "': expected section.key=value");
  const auto [section, key] = split_dotted(assignment.substr(0, eq));
  set_checked(cfg, section, key, assignment.substr(eq + 1));
}

std::string get_key(const RunConfig& cfg, const KeyInfo& key) {
  const Entry* e = find(key.section, key.key);
  if (!e) throw ConfigError(unknown_key_message(key.section, key.key));
  return e->get(cfg);
}

void apply_scenario(RunConfig& cfg, std::string_view name) {
  if (name == "custom") {
    cfg.scenario = mobility::ScenarioPreset{};
    return;
  }
  const auto p = mobility::scenario_preset(name);
  if (!p) {
    std::string msg = "unknown scenario '" + std::string(name) + "'; known:";
    for (const auto& n : mobility::scenario_names()) msg += " " + n;
    throw ConfigError(msg + " custom");
  }
  cfg.scenario = *p;
  // Ring presets are the desk-scale ones and default to short runs.
  if (p->wraparound) cfg.duration_s = 20.0;
}

void apply_scheme(RunConfig& cfg, std::string_view name) {
  const auto p = dcc::scheme_preset(name);
  if (!p) {
    std::string msg = "unknown scheme '" + std::string(name) + "'; known:";
    for (const auto& n : dcc::scheme_names()) msg += " " + n;
    throw ConfigError(msg);
  }
  cfg.scheme = p->name;
  cfg.dcc = p->dcc;
  const sps::SpsConfig defaults;
  cfg.sps.slrrc_min = p->slrrc_range ? p->slrrc_range->first : defaults.slrrc_min;
  cfg.sps.slrrc_max = p->slrrc_range ? p->slrrc_range->second : defaults.slrrc_max;
  cfg.sps.p_resel = p->p_resel.value_or(defaults.p_resel);
}

std::string dump(const RunConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& e : entries()) {
    if (e.info.section != section) {
      if (!section.empty()) os << '\n';
      section = e.info.section;
      os << '[' << section << "]\n";
    }
    os << e.info.key << " = " << e.get(cfg) << '\n';
  }
  return os.str();
}

std::vector<std::string> check(const RunConfig& cfg) {
  std::vector<std::string> v;
  if (cfg.dcc.range.p_min_dbm > cfg.dcc.range.p_max_dbm)
    v.push_back("dcc.p_min_dbm (" + fmt(cfg.dcc.range.p_min_dbm) + ") must not exceed dcc.p_max_dbm (" +
                fmt(cfg.dcc.range.p_max_dbm) + ")");
  if (!(cfg.dcc.range.u_min_pct < cfg.dcc.range.u_max_pct))
    v.push_back("dcc.u_min_pct must be below dcc.u_max_pct");
  if (!(cfg.warmup_s < cfg.duration_s))
    v.push_back("run.warmup_s (" + fmt(cfg.warmup_s) + ") must be below run.duration_s (" + fmt(cfg.duration_s) + ")");
  if (cfg.sps.slrrc_min > cfg.sps.slrrc_max) v.push_back("sps.slrrc_min must not exceed sps.slrrc_max");
  if (cfg.sps.t1 > cfg.sps.t2) v.push_back("sps.t1_ms must not exceed sps.t2_ms");
  for (const auto& s : cfg.violations()) {
    // Skip engine messages already reported above with key names.
    if (s.find("warmup_s") != std::string::npos) continue;
    if (s.find("p_min must not exceed") != std::string::npos) continue;
    if (s.find("u_min must be below") != std::string::npos) continue;
    if (s.find("slrrc_min <= slrrc_max") != std::string::npos && cfg.sps.slrrc_min > cfg.sps.slrrc_max) continue;
    if (s.find("t1 <= t2") != std::string::npos && cfg.sps.t1 > cfg.sps.t2) continue;
    v.push_back(s);
  }
  return v;
}

RunConfig load(const LoadRequest& req) {
  std::vector<std::string> errors;
  std::string text;
  std::string source = "<config>";
  if (req.file_text) {
    text = *req.file_text;
  } else if (req.file) {
    source = req.file->string();
    std::ifstream in(*req.file);
    if (!in) throw ConfigError(source + ": cannot read file");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  boost::property_tree::ptree tree;
  if (!text.empty()) {
    std::istringstream is(text);
    try {
      boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
  }

  // Presets first so file keys and overrides refine them.
  std::optional<std::string> scenario, scheme;
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& o : req.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      errors.push_back("override '" + o + "': expected section.key=value");
      continue;
    }
    overrides.emplace_back(trim(o.substr(0, eq)), o.substr(eq + 1));
  }
  if (const auto s = tree.get_optional<std::string>(boost::property_tree::ptree::path_type("run/scenario", '/')))
    scenario = trim(*s);
  if (const auto s = tree.get_optional<std::string>(boost::property_tree::ptree::path_type("run/scheme", '/')))
    scheme = trim(*s);
  if (req.scenario) scenario = req.scenario;
  if (req.scheme) scheme = req.scheme;
  for (const auto& [k, v] : overrides) {
    if (k == "run.scenario") scenario = trim(v);
    if (k == "run.scheme") scheme = trim(v);
  }

  RunConfig cfg;
  apply_scheme(cfg, "dcc-std");
  try {
    if (scenario) apply_scenario(cfg, *scenario);
    if (scheme) apply_scheme(cfg, *scheme);
  } catch (const ConfigError& e) {
    errors.push_back(e.what());
  }

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      errors.push_back(source + ":" + std::to_string(line_of(text, "", section)) + ": key '" + section +
                       "' outside any section");
      continue;
    }
    for (const auto& [key, value] : body) {
      if (section == "run" && (key == "scenario" || key == "scheme")) continue;
      try {
        set_checked(cfg, section, key, value.data());
      } catch (const ConfigError& e) {
        errors.push_back(source + ":" + std::to_string(line_of(text, section, key)) + ": " + e.what());
      }
    }
  }
  if (req.seed) cfg.seed = *req.seed;
  for (const auto& [k, v] : overrides) {
    if (k == "run.scenario" || k == "run.scheme") continue;
    try {
      const auto [section, key] = split_dotted(k);
      set_checked(cfg, section, key, v);
    } catch (const ConfigError& e) {
      errors.push_back(std::string("--set ") + k + ": " + e.what());
    }
  }

  if (errors.empty()) {
    for (auto& s : check(cfg)) errors.push_back(std::move(s));
  }
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
    throw ConfigError(msg);
  }
  return cfg;
}

}  // namespace cv2x::cli
