#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace levylab {

/// Philox4x32-10 counter-based generator. A (seed, stream) pair selects an
/// independent sequence; blocks are produced from a 64-bit counter.
class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static Block bijection(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

  std::uint32_t next_u32() {
    if (index_ == 4) refill();
    return buffer_[index_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  void refill() {
    const Block ctr{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                    static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = bijection(ctr, key_);
    ++counter_;
    index_ = 0;
  }

  Key key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Block buffer_{};
  int index_ = 4;
};

}  // namespace levylab
