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

#ifndef BLINDFL_FHE_CKKS_MODARITH_HPP
#define BLINDFL_FHE_CKKS_MODARITH_HPP

#include <cstdint>
#include <vector>

namespace blindfl::fhe::ckks {

/// Arithmetic modulo a word-sized prime q < 2^60.
struct Modulus {
  std::uint64_t q = 0;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= q ? s - q : s;
  }

  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + q - b;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % q);
  }

  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const {
    std::uint64_t acc = 1;
    base %= q;
    while (exp != 0) {
      if (exp & 1u) acc = mul(acc, base);
      base = mul(base, base);
      exp >>= 1;
    }
    return acc;
  }

  /// Inverse of a (a must be coprime with q; q prime here).
  std::uint64_t inv(std::uint64_t a) const { return pow(a, q - 2); }

  /// Reduces a signed value into [0, q).
  std::uint64_t from_signed(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(q);
    if (r < 0) r += static_cast<std::int64_t>(q);
    return static_cast<std::uint64_t>(r);
  }

  std::uint64_t from_i128(__int128 v) const {
    __int128 r = v % static_cast<__int128>(q);
    if (r < 0) r += static_cast<__int128>(q);
    return static_cast<std::uint64_t>(r);
  }

  /// Centered representative in (-q/2, q/2].
  std::int64_t to_signed(std::uint64_t v) const {
    return v > q / 2 ? static_cast<std::int64_t>(v) - static_cast<std::int64_t>(q)
                     : static_cast<std::int64_t>(v);
  }
};

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// Largest primes below 2^bits with p = 1 (mod 2n), distinct from `taken`,
/// in descending order. Throws InvalidArgument if the search space is
/// exhausted.
std::uint64_t pick_ntt_prime(int bits, std::uint32_t ring_dim,
                             const std::vector<std::uint64_t>& taken);

}  // namespace blindfl::fhe::ckks

#endif  // BLINDFL_FHE_CKKS_MODARITH_HPP
