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

#ifndef BLINDFL_FHE_CKKS_NTT_HPP
#define BLINDFL_FHE_CKKS_NTT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "blindfl/fhe/ckks/modarith.hpp"

namespace blindfl::fhe::ckks {

/// Negacyclic number-theoretic transform over Z_q[X]/(X^n + 1).
///
/// Twiddle factors are powers of a primitive 2n-th root of unity stored in
/// bit-reversed order (Cooley-Tukey forward, Gentleman-Sande inverse).
/// forward() leaves evaluations in a scrambled but fixed order; pointwise
/// products in that order correspond to ring products, which is all the
/// scheme needs.
class NttTables {
 public:
  NttTables(std::uint32_t n, Modulus mod);

  std::uint32_t degree() const { return n_; }
  const Modulus& modulus() const { return mod_; }

  /// In-place coefficient -> evaluation domain.
  void forward(std::span<std::uint64_t> a) const;

  /// In-place evaluation -> coefficient domain.
  void inverse(std::span<std::uint64_t> a) const;

 private:
  std::uint32_t n_;
  Modulus mod_;
  std::vector<std::uint64_t> root_powers_;      ///< psi^brv(i)
  std::vector<std::uint64_t> inv_root_powers_;  ///< psi^-brv(i)
  std::uint64_t n_inv_;
};

/// O(n^2) schoolbook product in Z_q[X]/(X^n + 1); the reference the NTT is
/// tested against.
std::vector<std::uint64_t> negacyclic_multiply_naive(
    std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
    Modulus mod);

}  // namespace blindfl::fhe::ckks

#endif  // BLINDFL_FHE_CKKS_NTT_HPP
