#include "cv2x/sps/occupancy.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cv2x::sps {

OccupancyTable::OccupancyTable(SubframeIndex origin, std::size_t length, int subchannels, bool full_pool)
    : origin_(origin),
      length_(length),
      subchannels_(subchannels),
      pool_(length * static_cast<std::size_t>(subchannels), full_pool ? 1 : 0),
      used_(length * static_cast<std::size_t>(subchannels), 0) {
  if (subchannels <= 0) throw std::invalid_argument("OccupancyTable: subchannels must be positive");
}

std::size_t OccupancyTable::index(SubframeIndex j, int i) const {
  if (j < origin_ || j >= end() || i < 0 || i >= subchannels_)
    throw std::out_of_range("OccupancyTable: slot outside table");
  return static_cast<std::size_t>(j - origin_) * static_cast<std::size_t>(subchannels_) + static_cast<std::size_t>(i);
}

void OccupancyTable::set_pool(SubframeIndex j, int i, bool member) { pool_[index(j, i)] = member ? 1 : 0; }
void OccupancyTable::set_used(SubframeIndex j, int i, bool used) { used_[index(j, i)] = used ? 1 : 0; }

double compute_cr(SubframeIndex n, const OccupancyTable& table, SubframeIndex tau1, SubframeIndex tau2,
                  SubframeIndex span) {
  if (tau2 - tau1 != span) throw std::invalid_argument("compute_cr: window length must equal the CR span");
  if (!(2 * (n - tau1) > span)) throw std::invalid_argument("compute_cr: window must lie mostly in the past of n");
  if (tau1 < table.origin() || tau2 > table.end()) throw std::invalid_argument("compute_cr: table does not cover window");
  std::uint64_t pool = 0;
  std::uint64_t used = 0;
  for (SubframeIndex j = tau1; j < tau2; ++j) {
    for (int i = 0; i < table.subchannels(); ++i) {
      if (!table.in_pool(j, i)) continue;
      ++pool;
      if (table.used(j, i)) ++used;
    }
  }
  if (pool == 0) throw std::invalid_argument("compute_cr: window holds no pool slot");
  return static_cast<double>(used) / static_cast<double>(pool);
}

CalibrationTable::CalibrationTable(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].first == points_[i - 1].first)
      throw std::invalid_argument("CalibrationTable: duplicate CBP abscissa");
  }
}

CalibrationTable CalibrationTable::parse(std::string_view text) {
  std::vector<std::pair<double, double>> pts;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("CalibrationTable: expected cbp:vehicles, got '" + item + "'");
    try {
      pts.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("CalibrationTable: malformed entry '" + item + "'");
    }
  }
  return CalibrationTable(std::move(pts));
}

std::string CalibrationTable::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i) os << ", ";
    char a[32], b[32];
    os << std::string_view(a, std::to_chars(a, a + sizeof a, points_[i].first).ptr - a) << ':'
       << std::string_view(b, std::to_chars(b, b + sizeof b, points_[i].second).ptr - b);
  }
  return os.str();
}

double CalibrationTable::operator()(double cbp) const {
  if (points_.empty()) throw std::domain_error("CalibrationTable: empty table");
  if (cbp <= points_.front().first) return points_.front().second;
  if (cbp >= points_.back().first) return points_.back().second;
  const auto hi = std::upper_bound(points_.begin(), points_.end(), std::make_pair(cbp, -1e300),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto lo = hi - 1;
  const double t = (cbp - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

double cr_limit(double cbp, double cbp_limit, const std::function<double(double)>& f_inv) {
  if (!(cbp > cbp_limit)) return 1.0;
  const double vehicles = f_inv(cbp);
  if (vehicles == 0.0) throw std::domain_error("cr_limit: calibration maps CBP to zero vehicles");
  return cbp_limit / vehicles;
}

}  // namespace cv2x::sps
