#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace episcale {

// Counter-based generator (Philox4x32-10). A stream is fully determined
// by (seed, stream_id), so replicate r of a Monte Carlo run can draw from
// stream r regardless of which worker executes it, and the results are
// independent of scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_{stream_id} {}

  std::uint32_t next_u32() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on (0, 1]; never returns 0 so -log(u) is always finite.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double phi = 6.283185307179586477 * uniform01();
    cached_ = r * std::sin(phi);
    has_cached_ = true;
    return r * std::cos(phi);
  }

 private:
  static void round(std::array<std::uint32_t, 4>& x,
                    std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * x[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * x[2];
    x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k[0],
         static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k[1],
         static_cast<std::uint32_t>(p0)};
    k[0] += 0x9E3779B9u;
    k[1] += 0xBB67AE85u;
  }

  void refill() {
    std::array<std::uint32_t, 4> x = {
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> k = key_;
    for (int r = 0; r < 10; ++r) round(x, k);
    buf_ = x;
    pos_ = 0;
    ++block_;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace episcale
