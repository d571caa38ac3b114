#include "discovery/rng.hpp"

namespace discovery {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replicate,
                                 std::uint64_t expert) noexcept {
  const std::uint64_t h0 = splitmix64(master_seed);
  const std::uint64_t h1 = splitmix64(h0 + 0x9E3779B97F4A7C15ULL * (replicate + 1));
  return splitmix64(h1 + 0xD1B54A32D192ED03ULL * (expert + 1));
}

double RngStream::next_unit() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

// Lemire's multiply-shift with rejection; unbiased.
std::uint64_t RngStream::next_below(std::uint64_t bound) {
  __uint128_t m = static_cast<__uint128_t>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<__uint128_t>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace discovery
