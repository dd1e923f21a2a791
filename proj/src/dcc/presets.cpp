#include <array>

#include "cv2x/dcc/dcc.hpp"

namespace cv2x::dcc {

namespace {

struct Row {
  const char* name;
  double p_max, p_min, u_max, u_min, b;
};

// Test schemes: identical except for power bounds, utilization band and B.
constexpr std::array<Row, 7> kTestSchemes{{
    {"dcc-1", 23, 23, 80, 50, 25},
    {"dcc-2", 23, 10, 50, 30, 25},
    {"dcc-3", 23, 5, 50, 30, 25},
    {"dcc-4", 23, 5, 50, 30, 35},
    {"dcc-5", 23, 5, 50, 30, 45},
    {"dcc-6", 23, 5, 50, 30, 55},
    {"dcc-7", 23, 0, 50, 30, 45},
}};

}  // namespace

std::optional<SchemePreset> scheme_preset(std::string_view name) {
  SchemePreset p;
  p.name = std::string(name);
  if (name == "baseline") {
    p.dcc.enabled = false;
    return p;
  }
  if (name == "dcc-std") return p;
  for (const Row& r : kTestSchemes) {
    if (name != r.name) continue;
    p.dcc.range.p_max_dbm = r.p_max;
    p.dcc.range.p_min_dbm = r.p_min;
    p.dcc.range.u_max_pct = r.u_max;
    p.dcc.range.u_min_pct = r.u_min;
    p.dcc.rate.density_coefficient = r.b;
    if (name == "dcc-7") {
      p.slrrc_range = std::pair{1, 5};
      p.p_resel = 0.2;
    }
    return p;
  }
  return std::nullopt;
}

std::vector<std::string> scheme_names() {
  std::vector<std::string> out{"baseline", "dcc-std"};
  for (const Row& r : kTestSchemes) out.emplace_back(r.name);
  return out;
}

}  // namespace cv2x::dcc
