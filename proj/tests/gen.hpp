#pragma once

// Small hand-rolled generators for property tests.

#include <cstdint>
#include <vector>

#include "cv2x/core/rng.hpp"

namespace testgen {

inline cv2x::RngStream stream(std::uint64_t seed, std::uint64_t id = 0) {
  return cv2x::RngStream(seed, cv2x::StreamPurpose::test, id);
}

inline double real(cv2x::RngStream& r, double lo, double hi) { return lo + (hi - lo) * r.uniform(); }

inline int integer(cv2x::RngStream& r, int lo, int hi) { return static_cast<int>(r.uniform_int(lo, hi)); }

inline bool coin(cv2x::RngStream& r, double p = 0.5) { return r.bernoulli(p); }

template <typename T>
const T& pick(cv2x::RngStream& r, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(r.below(v.size()))];
}

}  // namespace testgen
