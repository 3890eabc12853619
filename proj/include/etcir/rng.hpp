#pragma once

#include <cstdint>
#include <utility>

namespace etcir {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

// One SplitMix64 step: returns {new state, output}.
constexpr std::pair<std::uint64_t, std::uint64_t> splitmix64_next(
    std::uint64_t state) noexcept {
  state += kSplitMixGamma;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return {state, z ^ (z >> 31)};
}

// Keyed stream; every random decision in the pipeline is drawn from one of these.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    auto [state, out] = splitmix64_next(state_);
    state_ = state;
    return out;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

// Unbiased draw in [0, n) by rejection; n must be in [1, 2^63].
std::uint64_t bounded_uniform(SplitMix64& stream, std::uint64_t n);

// Top 53 bits of one draw, scaled into [0, 1).
double unit_interval(SplitMix64& stream) noexcept;

}  // namespace etcir
