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

#ifndef BLINDFL_FHE_CKKS_EMBEDDING_HPP
#define BLINDFL_FHE_CKKS_EMBEDDING_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace blindfl::fhe::ckks {

/// Canonical-embedding slot packer for the ring Z[X]/(X^n + 1).
///
/// A real polynomial m of degree < n is identified with its evaluations at
/// the primitive 2n-th roots of unity zeta^r for odd r. Slot j corresponds
/// to r = 5^j mod 2n; the remaining roots carry the complex conjugates, so
/// n/2 real (or complex) slots fit into one polynomial. Evaluating at all
/// odd powers reduces to one size-n FFT after twisting coefficients by
/// zeta^t, which is how both directions are implemented here.
class SlotEncoder {
 public:
  explicit SlotEncoder(std::uint32_t ring_dim);

  std::uint32_t degree() const { return n_; }
  std::uint32_t slots() const { return n_ / 2; }

  /// values.size() <= slots(). Returns n integer coefficients representing
  /// round(m_t * scale) with unused slots zeroed.
  std::vector<__int128> encode(std::span<const double> values,
                               long double scale) const;

  /// Inverse of encode: already-descaled real coefficients -> first `count`
  /// slot values.
  std::vector<double> decode(std::span<const long double> coeffs,
                             std::size_t count) const;

  /// Shared cached instance per ring dimension.
  static std::shared_ptr<const SlotEncoder> get(std::uint32_t ring_dim);

 private:
  void fft(std::span<std::complex<double>> a, bool inverse) const;

  std::uint32_t n_;
  std::vector<std::size_t> slot_bin_;       ///< slot j -> FFT bin (5^j - 1)/2
  std::vector<std::size_t> conj_bin_;       ///< slot j -> conjugate bin
  std::vector<std::complex<double>> twist_; ///< e^{i pi t / n}
  std::vector<std::size_t> bitrev_;
};

}  // namespace blindfl::fhe::ckks

#endif  // BLINDFL_FHE_CKKS_EMBEDDING_HPP
