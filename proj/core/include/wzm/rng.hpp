#pragma once

#include <array>
#include <cstdint>

namespace wzm {

/// Philox4x64-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter, std::array<std::uint64_t, 2> key);

/// Counter-based stream: the key is the user seed, the upper counter words select an
/// independent stream (one per trajectory), the lower words count blocks.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream_id) : key_{seed, 0x5752'4154'4348'4554ULL}, stream_(stream_id) {}

  std::uint64_t next_u64();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace wzm
