/*
 * Copyright 2026 the BlindFL authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BLINDFL_FHE_CKKS_BIGINT_HPP
#define BLINDFL_FHE_CKKS_BIGINT_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace blindfl::fhe::ckks {

/// Fixed-width 320-bit unsigned integer. Just enough arithmetic for CRT
/// reconstruction over a <= 240-bit modulus chain; not a general bignum.
struct U320 {
  std::array<std::uint64_t, 5> limb{};  // little-endian

  static U320 from_u64(std::uint64_t v) {
    U320 r;
    r.limb[0] = v;
    return r;
  }

  bool operator==(const U320&) const = default;

  int compare(const U320& o) const {
    for (int i = 4; i >= 0; --i) {
      if (limb[i] != o.limb[i]) return limb[i] < o.limb[i] ? -1 : 1;
    }
    return 0;
  }
  bool operator<(const U320& o) const { return compare(o) < 0; }
  bool operator>=(const U320& o) const { return compare(o) >= 0; }

  U320& add(const U320& o) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < 5; ++i) {
      carry += limb[i];
      carry += o.limb[i];
      limb[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
    return *this;
  }

  /// this -= o; caller guarantees this >= o.
  U320& sub(const U320& o) {
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 5; ++i) {
      const unsigned __int128 lhs = limb[i];
      const unsigned __int128 rhs = static_cast<unsigned __int128>(o.limb[i]) + borrow;
      if (lhs >= rhs) {
        limb[i] = static_cast<std::uint64_t>(lhs - rhs);
        borrow = 0;
      } else {
        limb[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) + lhs - rhs);
        borrow = 1;
      }
    }
    return *this;
  }

  U320 mul_u64(std::uint64_t v) const {
    U320 r;
    unsigned __int128 carry = 0;
    for (int i = 0; i < 5; ++i) {
      carry += static_cast<unsigned __int128>(limb[i]) * v;
      r.limb[i] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
    return r;
  }

  long double to_long_double() const {
    long double acc = 0.0L;
    for (int i = 4; i >= 0; --i) {
      acc = acc * 18446744073709551616.0L + static_cast<long double>(limb[i]);
    }
    return acc;
  }
};

}  // namespace blindfl::fhe::ckks

#endif  // BLINDFL_FHE_CKKS_BIGINT_HPP
