#pragma once

#include <array>
#include <concepts>
#include <cstdint>

namespace fappr {

__extension__ using uint128 = unsigned __int128;

/// Any source of uniformly distributed 64-bit words.
template <typename G>
concept RandomStream = requires(G& g) {
  { g() } -> std::convertible_to<std::uint64_t>;
};

/// Uniform double in [0, 1) from the top 53 bits.
template <RandomStream G>
inline double uniform01(G& g) {
  return static_cast<double>(static_cast<std::uint64_t>(g()) >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n), n > 0, by 64x64 multiply-high.
template <RandomStream G>
inline std::uint64_t uniform_index(G& g, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<uint128>(static_cast<std::uint64_t>(g())) * n) >> 64);
}

/// Philox4x32-10 block function (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter apply(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85;
};

/// Counter-based stream owned by one walk for one step.
///
/// The key is the run seed; the counter is (source, walk index, step, block).
/// Two streams with different coordinates never share a Philox block, so the
/// draws a walk sees do not depend on which worker extends it or in which
/// order.
class WalkStream {
 public:
  WalkStream(std::uint64_t seed, std::uint32_t source, std::uint32_t walk, std::uint32_t step) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{source, walk, step, 0} {}

  std::uint64_t operator()() noexcept {
    if (used_ == 4) refill();
    const std::uint64_t hi = block_[used_];
    const std::uint64_t lo = block_[used_ + 1];
    used_ += 2;
    return (hi << 32) | lo;
  }

 private:
  void refill() noexcept {
    block_ = Philox4x32::apply(ctr_, key_);
    ++ctr_[3];
    used_ = 0;
  }

  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter block_{};
  int used_ = 4;
};

}  // namespace fappr
