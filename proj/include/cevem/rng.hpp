#pragma once

// Counter-based random streams. Every draw is a pure function of
// (master seed, stream kind, path index, substream index, draw index), so
// ensembles produce identical numbers no matter how paths are scheduled.

#include <array>
#include <cstdint>

#include <gsl/gsl_cdf.h>

namespace cevem::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3").
inline Counter philox4x32(Counter ctr, Key key) noexcept {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t prod0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t prod1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(prod0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(prod0);
    const auto hi1 = static_cast<std::uint32_t>(prod1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(prod1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

/// Maps 64 random bits to the open interval (0, 1) with 52-bit resolution;
/// the extreme values are 2^-53 and 1 - 2^-53, both exactly representable.
inline double bits_to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Standard-normal quantile (Wichura AS241 via GSL).
inline double normal_quantile(double u) noexcept { return gsl_cdf_ugaussian_Pinv(u); }

enum class StreamKind : std::uint32_t {
  Skeleton = 1,
  Bridge = 2,
  Oracle = 3,
  Diagnostics = 4,
};

/// Sequential view of one counter-based substream. Each Philox block yields
/// two uniforms; draw i comes from block i/2, lane i%2.
class Substream {
 public:
  Substream(std::uint64_t seed, StreamKind kind, std::uint32_t path,
            std::uint32_t sub = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        kind_(static_cast<std::uint32_t>(kind)),
        path_(path),
        sub_(sub) {}

  double uniform() noexcept {
    if (lane_ == 2) refill();
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(block_[2 * lane_ + 1]) << 32) | block_[2 * lane_];
    ++lane_;
    return bits_to_open_unit(bits);
  }

  double normal() noexcept { return normal_quantile(uniform()); }

  double operator()() noexcept { return normal(); }

 private:
  void refill() noexcept {
    block_ = philox4x32({next_block_, sub_, path_, kind_}, key_);
    ++next_block_;
    lane_ = 0;
  }

  Key key_;
  std::uint32_t kind_;
  std::uint32_t path_;
  std::uint32_t sub_;
  std::uint32_t next_block_ = 0;
  int lane_ = 2;
  Counter block_{};
};

}  // namespace cevem::rng
