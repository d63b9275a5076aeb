/* Copyright 2026 The honesty-lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
======================================================================== */

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).

#ifndef HONESTY_PHILOX_HPP
#define HONESTY_PHILOX_HPP

#include <array>
#include <cstdint>

namespace honesty {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One block of the Philox4x32-10 bijection.
constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += W0;
      key[1] += W1;
    }
    std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
    std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

/// Sequential stream for one (seed, stream id) pair. Different stream
/// ids give independent substreams of the same seed.
class PhiloxStream {
public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (idx_ == 4) {
      buf_ = philox4x32_10(ctr_, key_);
      if (++ctr_[0] == 0)
        ++ctr_[1];
      idx_ = 0;
    }
    return buf_[idx_++];
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    std::uint64_t hi = next_u32(), lo = next_u32();
    std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

private:
  PhiloxKey key_;
  PhiloxCounter ctr_;
  PhiloxCounter buf_{};
  int idx_ = 4;
};

} // namespace honesty

#endif // HONESTY_PHILOX_HPP
