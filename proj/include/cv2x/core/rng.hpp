#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace cv2x {

/// Purpose tags for independent random streams. Values are part of the
/// stream key; do not renumber.
enum class StreamPurpose : std::uint64_t {
  placement = 1,
  start_offset = 2,
  selection = 3,
  slrrc = 4,
  shadowing = 5,
  fading = 6,
  perturbation = 7,
  static_shadowing = 8,
  test = 99,
};

/// Counter-based random stream keyed by (seed, purpose, id).
///
/// Draw i of a stream is a pure function of (seed, purpose, id, i): a
/// SplitMix64 finalizer applied to key + i * golden-gamma. All derived
/// distributions are implemented here so results do not depend on the
/// standard library's unspecified distribution algorithms.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() : RngStream(0, StreamPurpose::test, 0) {}
  RngStream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform integer in [0, n); n > 0. Unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (second variate cached).
  double normal();

  /// Gamma(shape, scale = 1), Marsaglia-Tsang.
  double gamma(double shape);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  std::uint64_t draws() const { return counter_; }
  std::uint64_t key() const { return key_; }

  /// Stateless draw used for quantities that must be identical no matter
  /// which side asks first (e.g. static per-pair shadowing).
  static double keyed_normal(std::uint64_t seed, StreamPurpose purpose, std::uint64_t a,
                             std::uint64_t b);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace cv2x
