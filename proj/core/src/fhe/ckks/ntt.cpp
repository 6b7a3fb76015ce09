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

#include "blindfl/fhe/ckks/ntt.hpp"

#include <bit>

#include "blindfl/errors.hpp"

namespace blindfl::fhe::ckks {

namespace {

std::uint32_t bit_reverse(std::uint32_t v, int bits) {
  std::uint32_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (v & 1u);
    v >>= 1;
  }
  return r;
}

/// Finds a primitive 2n-th root of unity mod q (q = 1 mod 2n). The search
/// walks small candidates in order, so the result is deterministic.
std::uint64_t find_primitive_root(std::uint32_t n, const Modulus& mod) {
  const std::uint64_t order = 2ULL * n;
  const std::uint64_t cofactor = (mod.q - 1) / order;
  for (std::uint64_t g = 2;; ++g) {
    std::uint64_t candidate = mod.pow(g, cofactor);
    // candidate has order dividing 2n; it is primitive iff candidate^n = -1.
    if (mod.pow(candidate, n) == mod.q - 1) return candidate;
    if (g > 1000) throw InvalidArgument("no primitive 2n-th root found");
  }
}

}  // namespace

NttTables::NttTables(std::uint32_t n, Modulus mod) : n_(n), mod_(mod) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw InvalidArgument("NTT degree must be a power of two >= 2");
  }
  if ((mod.q - 1) % (2ULL * n) != 0) {
    throw InvalidArgument("modulus is not NTT-friendly for this degree");
  }
  const int log_n = std::countr_zero(n);
  const std::uint64_t psi = find_primitive_root(n, mod);
  const std::uint64_t psi_inv = mod.inv(psi);

  root_powers_.resize(n);
  inv_root_powers_.resize(n);
  std::uint64_t fwd = 1, inv = 1;
  std::vector<std::uint64_t> fwd_seq(n), inv_seq(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    fwd_seq[i] = fwd;
    inv_seq[i] = inv;
    fwd = mod.mul(fwd, psi);
    inv = mod.mul(inv, psi_inv);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    root_powers_[i] = fwd_seq[bit_reverse(i, log_n)];
    inv_root_powers_[i] = inv_seq[bit_reverse(i, log_n)];
  }
  n_inv_ = mod.inv(n);
}

void NttTables::forward(std::span<std::uint64_t> a) const {
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t w = root_powers_[m + i];
      std::uint64_t* x = a.data() + 2 * i * t;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint64_t u = x[j];
        const std::uint64_t v = mod_.mul(y[j], w);
        x[j] = mod_.add(u, v);
        y[j] = mod_.sub(u, v);
      }
    }
  }
}

void NttTables::inverse(std::span<std::uint64_t> a) const {
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint64_t w = inv_root_powers_[h + i];
      std::uint64_t* x = a.data() + j1;
      std::uint64_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint64_t u = x[j];
        const std::uint64_t v = y[j];
        x[j] = mod_.add(u, v);
        y[j] = mod_.mul(mod_.sub(u, v), w);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (std::size_t i = 0; i < n_; ++i) a[i] = mod_.mul(a[i], n_inv_);
}

std::vector<std::uint64_t> negacyclic_multiply_naive(
    std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
    Modulus mod) {
  const std::size_t n = a.size();
  std::vector<std::uint64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t prod = mod.mul(a[i], b[j]);
      const std::size_t k = i + j;
      if (k < n) {
        out[k] = mod.add(out[k], prod);
      } else {
        out[k - n] = mod.sub(out[k - n], prod);  // X^n = -1
      }
    }
  }
  return out;
}

}  // namespace blindfl::fhe::ckks
