#pragma once

#include <cstdint>
#include <random>

namespace discovery {

/// SplitMix64 finalizer; used only to derive stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the stream owned by (replicate, expert) under `master_seed`:
///
///   h0 = splitmix64(master_seed)
///   h1 = splitmix64(h0 + 0x9E3779B97F4A7C15 * (replicate + 1))
///   h2 = splitmix64(h1 + 0xD1B54A32D192ED03 * (expert + 1))
///
/// Distinct (replicate, expert) pairs get unrelated mt19937_64 states, so a
/// stream never depends on how many draws other streams have made.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t replicate,
                                 std::uint64_t expert) noexcept;

/// Random stream for one (expert, replicate) pair. Transforms to integers and
/// reals are implemented here rather than through <random> distributions so
/// draw sequences do not depend on the standard library vendor.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}
  RngStream(std::uint64_t master_seed, std::uint64_t replicate, std::uint64_t expert)
      : engine_(derive_stream_seed(master_seed, replicate, expert)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0,1), 53-bit resolution.
  double next_unit();

  /// Uniform on {0, ..., bound-1}; bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace discovery
