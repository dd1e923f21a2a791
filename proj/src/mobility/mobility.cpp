#include "cv2x/mobility/mobility.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace cv2x::mobility {

namespace {

struct PresetRow {
  const char* name;
  int count;
  double density;
  double speed_kmh;
  double road_km;
  bool wrap;
};

constexpr std::array<PresetRow, 12> kPresets{{
    {"freeway-high", 300, 7, 140, 3.6, false},
    {"freeway-low", 600, 14, 70, 3.6, false},
    {"urban-medium", 1200, 28, 15, 3.6, false},
    {"urban-high", 2400, 56, 15, 3.6, false},
    {"urban-ultrahigh", 4800, 111, 15, 3.6, false},
    // Desk scale: 10x shorter ring road.
    {"freeway-high-mini", 30, 7, 140, 0.36, true},
    {"freeway-low-mini", 60, 14, 70, 0.36, true},
    {"urban-medium-mini", 120, 28, 15, 0.36, true},
    {"urban-high-mini", 240, 56, 15, 0.36, true},
    {"urban-ultrahigh-mini", 400, 92.6, 15, 0.36, true},
    // 1.2 km rings: sparse (no DCC intervention) and over-saturated.
    {"sparse-ring", 36, 2.5, 140, 1.2, true},
    {"dense-ring", 400, 27.8, 15, 1.2, true},
}};

}  // namespace

int ScenarioPreset::resolved_vehicle_count() const {
  if (vehicle_count > 0) return vehicle_count;
  const double per_lane = density_veh_per_km_lane * road_length_km;
  return static_cast<int>(std::lround(per_lane)) * lanes;
}

void ScenarioPreset::validate() const {
  if (!(road_length_km > 0.0)) throw std::invalid_argument("scenario: road length must be > 0");
  if (lanes < 1) throw std::invalid_argument("scenario: at least one lane required");
  if (!(lane_width_m > 0.0)) throw std::invalid_argument("scenario: lane width must be > 0");
  if (vehicle_count < 0) throw std::invalid_argument("scenario: vehicle count must be >= 0");
  if (!(density_veh_per_km_lane >= 0.0)) throw std::invalid_argument("scenario: density must be >= 0");
  if (!(speed_kmh >= 0.0)) throw std::invalid_argument("scenario: speed must be >= 0");
  if (!(perturbation_sigma_mps >= 0.0 && perturbation_reversion_per_s >= 0.0))
    throw std::invalid_argument("scenario: perturbation parameters must be >= 0");
  const int count = resolved_vehicle_count();
  const int per_lane_max = (count + lanes - 1) / lanes;
  if (per_lane_max > 0 && road_length_m() / per_lane_max < 1.0)
    throw std::invalid_argument("scenario: density exceeds jam density (headway below 1 m)");
}

std::optional<ScenarioPreset> scenario_preset(std::string_view name) {
  for (const auto& r : kPresets) {
    if (name != r.name) continue;
    ScenarioPreset p;
    p.name = r.name;
    p.vehicle_count = r.count;
    p.density_veh_per_km_lane = r.density;
    p.speed_kmh = r.speed_kmh;
    p.road_length_km = r.road_km;
    p.wraparound = r.wrap;
    return p;
  }
  return std::nullopt;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& r : kPresets) out.emplace_back(r.name);
  return out;
}

Road::Road(const ScenarioPreset& p)
    : length_m_(p.road_length_m()),
      lanes_(p.lanes),
      lane_width_m_(p.lane_width_m),
      wraparound_(p.wraparound),
      region_lo_(p.road_length_m() / 3.0),
      region_hi_(2.0 * p.road_length_m() / 3.0) {}

double Road::distance(const Position& a, const Position& b) const {
  double dx = std::abs(a.x - b.x);
  if (wraparound_) dx = std::min(dx, length_m_ - dx);
  const double dy = (a.lane - b.lane) * lane_width_m_;
  return std::hypot(dx, dy);
}

bool in_measurement_region(const Position& p, const ScenarioPreset& preset) {
  return Road(preset).in_measurement_region(p);
}

std::vector<VehicleKinematics> generate_scenario(const ScenarioPreset& preset, RngStream& rng) {
  preset.validate();
  const Road road(preset);
  const int count = preset.resolved_vehicle_count();
  const double speed = preset.speed_kmh / 3.6;
  std::vector<VehicleKinematics> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int lane = 0; lane < preset.lanes; ++lane) {
    const int in_lane = count / preset.lanes + (lane < count % preset.lanes ? 1 : 0);
    std::vector<double> xs(static_cast<std::size_t>(in_lane));
    for (double& x : xs) x = rng.uniform() * road.length_m();
    std::sort(xs.begin(), xs.end());
    for (double x : xs) {
      VehicleKinematics v;
      v.position = {x, lane};
      v.speed_mps = road.direction(lane) * speed;
      v.nominal_speed_mps = v.speed_mps;
      out.push_back(v);
    }
  }
  return out;
}

void step(std::span<VehicleKinematics> vehicles, double dt_s, const Road& road, const Perturbation& perturb,
          std::span<RngStream> rngs) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("mobility::step: dt must be positive");
  const bool perturbed = perturb.sigma_mps > 0.0;
  if (perturbed && rngs.size() < vehicles.size())
    throw std::invalid_argument("mobility::step: one random stream per vehicle required");
  const double length = road.length_m();
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    auto& v = vehicles[i];
    v.last_jump_m = 0.0;
    if (perturbed) {
      const double nominal = std::abs(v.nominal_speed_mps);
      double s = std::abs(v.speed_mps);
      s += perturb.reversion_per_s * (nominal - s) * dt_s + perturb.sigma_mps * std::sqrt(dt_s) * rngs[i].normal();
      s = std::clamp(s, 0.0, 1.2 * nominal);
      v.speed_mps = v.nominal_speed_mps < 0.0 ? -s : s;
    }
    double x = v.position.x + v.speed_mps * dt_s;
    if (x > length) {
      x -= length;
      v.last_jump_m = -length;
    } else if (x < 0.0) {
      x += length;
      v.last_jump_m = length;
    }
    v.position.x = x;
  }
}

}  // namespace cv2x::mobility
