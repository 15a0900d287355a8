#pragma once

// Counter-based 64-bit generator: value(i) is a bijective mix of
// key + i * gamma, so a stream is fully determined by (seed, stream id)
// and independent streams can be split off without sharing state. Color
// sampling inverts the cumulative rational law against a 64-bit uniform
// draw; thresholds are exact to within one part in 2^64.

#include <cstdint>
#include <vector>

#include "roadcolor/errors.hpp"
#include "roadcolor/rational.hpp"

namespace roadcolor {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed)
      : key_(detail::mix64(seed + 0x9e3779b97f4a7c15ULL)) {}

  // Independent stream derived from this generator's key. Deterministic in
  // (seed, id) and unaffected by draws from the parent.
  CounterRng stream(std::uint64_t id) const {
    CounterRng child(0);
    child.key_ = detail::mix64(key_ ^ detail::mix64(id + 0x632be59bd9b4e019ULL));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next() {
    ++counter_;
    return detail::mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Draws an index with the given rational weights by cumulative inversion in
// the declared order.
class RationalSampler {
 public:
  explicit RationalSampler(const std::vector<Rat>& weights) {
    if (weights.empty()) throw input_error("sampler needs at least one weight");
    Rat cum = 0;
    Rat total = 0;
    for (const Rat& w : weights) {
      if (w < 0) throw input_error("sampler weights must be non-negative");
      total += w;
    }
    if (total != 1) throw input_error("sampler weights must sum to 1");
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      // floor(cum * 2^64)
      BigInt scaled = (numerator(cum) << 64) / denominator(cum);
      thresholds_.push_back(scaled.convert_to<std::uint64_t>());
    }
  }

  int draw(CounterRng& rng) const {
    const std::uint64_t u = rng.next();
    for (std::size_t i = 0; i < thresholds_.size(); ++i)
      if (u < thresholds_[i]) return static_cast<int>(i);
    return static_cast<int>(thresholds_.size());
  }

 private:
  std::vector<std::uint64_t> thresholds_;
};

}  // namespace roadcolor
