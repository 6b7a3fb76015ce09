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

#include "blindfl/fhe/ckks/modarith.hpp"

#include <algorithm>

#include "blindfl/errors.hpp"

namespace blindfl::fhe::ckks {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t acc = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1u) acc = mulmod(acc, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return acc;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set is deterministic for every n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t pick_ntt_prime(int bits, std::uint32_t ring_dim,
                             const std::vector<std::uint64_t>& taken) {
  // Negacyclic NTT of degree n needs a primitive 2n-th root of unity,
  // i.e. p = 1 (mod 2n).
  const std::uint64_t step = 2ULL * ring_dim;
  const std::uint64_t top = (bits == 64) ? ~0ULL : (1ULL << bits);
  std::uint64_t candidate = ((top - 1) / step) * step + 1;
  while (candidate > (top >> 1)) {
    if (is_prime_u64(candidate) &&
        std::find(taken.begin(), taken.end(), candidate) == taken.end()) {
      return candidate;
    }
    candidate -= step;
  }
  throw InvalidArgument("no NTT-friendly prime of the requested size");
}

}  // namespace blindfl::fhe::ckks
