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

#include "blindfl/fhe/ckks/embedding.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "blindfl/errors.hpp"

namespace blindfl::fhe::ckks {

namespace {

/// Rounds a long double known to fit comfortably in 128 bits.
__int128 round_to_i128(long double x) {
  const bool neg = x < 0.0L;
  if (neg) x = -x;
  long double r = roundl(x);
  const long double hi = floorl(r / 18446744073709551616.0L);
  const auto lo = static_cast<std::uint64_t>(r - hi * 18446744073709551616.0L);
  unsigned __int128 v =
      (static_cast<unsigned __int128>(static_cast<std::uint64_t>(hi)) << 64) | lo;
  return neg ? -static_cast<__int128>(v) : static_cast<__int128>(v);
}

}  // namespace

SlotEncoder::SlotEncoder(std::uint32_t ring_dim) : n_(ring_dim) {
  if (n_ < 4 || (n_ & (n_ - 1)) != 0) {
    throw InvalidArgument("encoder ring dimension must be a power of two >= 4");
  }
  const std::uint32_t two_n = 2 * n_;
  const std::uint32_t slots = n_ / 2;

  slot_bin_.resize(slots);
  conj_bin_.resize(slots);
  std::uint64_t r = 1;  // 5^j mod 2n walks the slot orbit
  for (std::uint32_t j = 0; j < slots; ++j) {
    slot_bin_[j] = static_cast<std::size_t>((r - 1) / 2);
    conj_bin_[j] = static_cast<std::size_t>((two_n - r - 1) / 2);
    r = (r * 5) % two_n;
  }

  twist_.resize(n_);
  for (std::uint32_t t = 0; t < n_; ++t) {
    const double angle = std::numbers::pi * static_cast<double>(t) / n_;
    twist_[t] = {std::cos(angle), std::sin(angle)};
  }

  bitrev_.resize(n_);
  std::size_t log_n = 0;
  while ((1u << log_n) < n_) ++log_n;
  for (std::uint32_t i = 0; i < n_; ++i) {
    std::size_t rev = 0;
    for (std::size_t b = 0; b < log_n; ++b) {
      if (i & (1u << b)) rev |= 1u << (log_n - 1 - b);
    }
    bitrev_[i] = rev;
  }
}

void SlotEncoder::fft(std::span<std::complex<double>> a, bool inverse) const {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle =
        (inverse ? -2.0 : 2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen{std::cos(angle), std::sin(angle)};
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv_n;
  }
}

std::vector<__int128> SlotEncoder::encode(std::span<const double> values,
                                          long double scale) const {
  if (values.size() > slots()) {
    throw InvalidArgument("too many values for the slot capacity");
  }
  std::vector<std::complex<double>> eval(n_, {0.0, 0.0});
  for (std::size_t j = 0; j < values.size(); ++j) {
    eval[slot_bin_[j]] = {values[j], 0.0};
    eval[conj_bin_[j]] = {values[j], 0.0};  // conjugate of a real is itself
  }
  fft(eval, /*inverse=*/true);
  std::vector<__int128> coeffs(n_);
  for (std::uint32_t t = 0; t < n_; ++t) {
    // untwist; imaginary part cancels for conjugate-symmetric inputs
    const double re = eval[t].real() * twist_[t].real() +
                      eval[t].imag() * twist_[t].imag();
    coeffs[t] = round_to_i128(static_cast<long double>(re) * scale);
  }
  return coeffs;
}

std::vector<double> SlotEncoder::decode(std::span<const long double> coeffs,
                                        std::size_t count) const {
  if (coeffs.size() != n_) throw InvalidArgument("decode expects n coefficients");
  if (count > slots()) throw InvalidArgument("decode count exceeds slot capacity");
  std::vector<std::complex<double>> g(n_);
  for (std::uint32_t t = 0; t < n_; ++t) {
    const double c = static_cast<double>(coeffs[t]);
    g[t] = {c * twist_[t].real(), c * twist_[t].imag()};
  }
  fft(g, /*inverse=*/false);
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    out[j] = g[slot_bin_[j]].real();
  }
  return out;
}

std::shared_ptr<const SlotEncoder> SlotEncoder::get(std::uint32_t ring_dim) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::shared_ptr<const SlotEncoder>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(ring_dim);
  if (it != cache.end()) return it->second;
  auto enc = std::make_shared<const SlotEncoder>(ring_dim);
  cache.emplace(ring_dim, enc);
  return enc;
}

}  // namespace blindfl::fhe::ckks
