#include "etcir/rng.hpp"

#include "etcir/error.hpp"

namespace etcir {

std::uint64_t bounded_uniform(SplitMix64& stream, std::uint64_t n) {
  if (n == 0 || n > (std::uint64_t{1} << 63)) {
    throw Error(Errc::invalid_argument, "bounded_uniform: n must be in [1, 2^63]");
  }
  // floor(2^64 / n) * n, computed without 128-bit arithmetic.
  const std::uint64_t rem = (0 - n) % n;  // 2^64 mod n
  const std::uint64_t limit = 0 - rem;    // 2^64 - rem; 0 means "no rejection"
  for (;;) {
    const std::uint64_t x = stream.next();
    if (limit == 0 || x < limit) return x % n;
  }
}

double unit_interval(SplitMix64& stream) noexcept {
  return static_cast<double>(stream.next() >> 11) * 0x1.0p-53;
}

}  // namespace etcir
