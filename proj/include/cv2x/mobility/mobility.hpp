#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cv2x/core/rng.hpp"
#include "cv2x/core/units.hpp"

namespace cv2x::mobility {

/// Straight multi-lane highway. Lanes [0, lanes/2) drive towards +x, the
/// rest towards -x.
struct ScenarioPreset {
  std::string name = "custom";
  int vehicle_count = 0;  // 0: derive from density
  double density_veh_per_km_lane = 7.0;
  double speed_kmh = 140.0;
  double road_length_km = 3.6;
  int lanes = 12;
  double lane_width_m = kDefaultLaneWidthM;
  /// Ring geometry: distances measured the short way round, no edge effect.
  bool wraparound = false;
  /// Mean-reverting speed perturbation; sigma 0 disables it.
  double perturbation_sigma_mps = 0.0;
  double perturbation_reversion_per_s = 0.5;

  double road_length_m() const { return road_length_km * 1000.0; }
  /// Resolved vehicle count (explicit, else density rounded per lane).
  int resolved_vehicle_count() const;

  /// Throws std::invalid_argument; rejects counts whose per-lane headway
  /// would fall below 1 m.
  void validate() const;
};

std::optional<ScenarioPreset> scenario_preset(std::string_view name);
std::vector<std::string> scenario_names();

class Road {
 public:
  explicit Road(const ScenarioPreset& p);

  double length_m() const { return length_m_; }
  int lanes() const { return lanes_; }
  double lane_width_m() const { return lane_width_m_; }
  bool wraparound() const { return wraparound_; }
  int direction(int lane) const { return lane < lanes_ / 2 ? 1 : -1; }

  /// Euclidean distance; along-road separation wraps on a ring road.
  double distance(const Position& a, const Position& b) const;

  /// Middle third of the road, boundaries inclusive.
  bool in_measurement_region(const Position& p) const { return p.x >= region_lo_ && p.x <= region_hi_; }
  double region_lo_m() const { return region_lo_; }
  double region_hi_m() const { return region_hi_; }

 private:
  double length_m_;
  int lanes_;
  double lane_width_m_;
  bool wraparound_;
  double region_lo_;
  double region_hi_;
};

struct VehicleKinematics {
  Position position;
  double speed_mps = 0.0;          // signed by direction
  double nominal_speed_mps = 0.0;  // signed; reversion target
  double last_jump_m = 0.0;        // x displacement from the last respawn, 0 otherwise
};

bool in_measurement_region(const Position& p, const ScenarioPreset& preset);

/// Uniform random placement per lane at the preset density.
std::vector<VehicleKinematics> generate_scenario(const ScenarioPreset& preset, RngStream& rng);

struct Perturbation {
  double sigma_mps = 0.0;
  double reversion_per_s = 0.5;
};

/// Advances every vehicle by dt seconds. Vehicles leaving the road re-enter
/// at the opposite end of their lane. `rngs` holds one stream per vehicle
/// and is only drawn from when the perturbation is enabled.
void step(std::span<VehicleKinematics> vehicles, double dt_s, const Road& road, const Perturbation& perturb,
          std::span<RngStream> rngs);

}  // namespace cv2x::mobility
