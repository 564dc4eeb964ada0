#pragma once

#include <cmath>
#include <cstdint>

#include "qk/common.hpp"

namespace qk {

// Philox4x32-10 counter-based generator. Each replica owns an independent
// stream keyed by (seed, replica index), so adding replicas never perturbs
// existing streams and replays are bit-identical for a fixed seed.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        ctr2_(static_cast<std::uint32_t>(stream)),
        ctr3_(static_cast<std::uint32_t>(stream >> 32)) {}

  // Next 64 uniform bits.
  std::uint64_t next_u64() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    ++block_;
    std::uint32_t x0 = c0, x1 = c1, x2 = ctr2_, x3 = ctr3_;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ull * x0;
      const std::uint64_t p1 = 0xCD9E8D57ull * x2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t y0 = hi1 ^ x1 ^ k0;
      const std::uint32_t y1 = lo1;
      const std::uint32_t y2 = hi0 ^ x3 ^ k1;
      const std::uint32_t y3 = lo0;
      x0 = y0; x1 = y1; x2 = y2; x3 = y3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    spare_ = (static_cast<std::uint64_t>(x2) << 32) | x3;
    have_ = true;
    return (static_cast<std::uint64_t>(x0) << 32) | x1;
  }

  // Uniform in (0,1): 53 random bits, never exactly 0.
  double next_uniform() {
    const std::uint64_t u = next_u64() >> 11;
    return (static_cast<double>(u) + 0.5) * (1.0 / 9007199254740992.0);
  }

  // Standard normal pair via Box-Muller (deterministic across platforms,
  // unlike std::normal_distribution).
  void next_normal_pair(double& n1, double& n2) {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    n1 = r * std::cos(a);
    n2 = r * std::sin(a);
  }

 private:
  std::uint32_t key0_, key1_;
  std::uint32_t ctr2_, ctr3_;  // stream id occupies the high counter words
  std::uint64_t block_ = 0;    // low counter words increment per block
  std::uint64_t spare_ = 0;
  bool have_ = false;
};

}  // namespace qk
