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

#ifndef BLINDFL_FHE_CKKS_RNS_HPP
#define BLINDFL_FHE_CKKS_RNS_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "blindfl/fhe/ckks/bigint.hpp"
#include "blindfl/fhe/ckks/modarith.hpp"
#include "blindfl/fhe/ckks/ntt.hpp"

namespace blindfl::fhe {
struct FheParams;
}

namespace blindfl::fhe::ckks {

/// Extra power-of-two precision applied on top of the declared scale.
/// Fresh ciphertexts encode at 2^(scale_log2 + kScaleBoostLog2); plaintext
/// multiplication operands encode at exactly the prime being dropped, so
/// the effective scale is preserved bit-for-bit across rescales. This keeps
/// decryption noise far below the declared fixed-point resolution even
/// after the chain is fully consumed.
inline constexpr int kScaleBoostLog2 = 40;

/// Polynomial in residue-number-system form: one residue vector per active
/// prime, stored in the NTT (evaluation) domain. Residue order follows
/// RnsContext::active_indices for the owning object's level.
struct RnsPoly {
  std::vector<std::vector<std::uint64_t>> residues;

  bool empty() const { return residues.empty(); }
  bool operator==(const RnsPoly&) const = default;
};

/// Precomputed tables for one (ring_dim, modulus chain) pair.
///
/// Chain layout: index 0 and index size-1 are the outer primes; indices
/// 1..L are the inner (rescaling) primes. A ciphertext at level l uses the
/// primes {0} + {1..l} + {last}; rescaling from level l drops chain index l.
class RnsContext {
 public:
  RnsContext(std::uint32_t ring_dim, const std::vector<int>& chain_bits);

  std::uint32_t degree() const { return ring_dim_; }
  int max_level() const { return static_cast<int>(primes_.size()) - 2; }
  std::size_t chain_size() const { return primes_.size(); }

  const Modulus& modulus(std::size_t chain_index) const { return primes_[chain_index]; }
  const NttTables& ntt(std::size_t chain_index) const { return *ntt_[chain_index]; }

  const std::vector<std::size_t>& active_indices(int level) const;
  std::size_t drop_index(int level) const { return static_cast<std::size_t>(level); }

  struct CrtTable {
    U320 q;       ///< product of active primes
    U320 q_half;  ///< floor(q / 2)
    std::vector<U320> q_over_qi;
    std::vector<std::uint64_t> inv_q_over_qi;  ///< (q/qi)^-1 mod qi
  };
  const CrtTable& crt(int level) const;

  /// Inverse of the dropped prime modulo each prime that stays active,
  /// aligned with active_indices(level - 1).
  const std::vector<std::uint64_t>& rescale_inverses(int level) const;

  /// Shared, cached context per parameter set.
  static std::shared_ptr<const RnsContext> get(const FheParams& params);

 private:
  std::uint32_t ring_dim_;
  std::vector<Modulus> primes_;
  std::vector<std::unique_ptr<NttTables>> ntt_;
  std::vector<std::vector<std::size_t>> active_;  ///< per level
  std::vector<CrtTable> crt_;                     ///< per level
  std::vector<std::vector<std::uint64_t>> rescale_inv_;  ///< per level (>=1)
};

}  // namespace blindfl::fhe::ckks

#endif  // BLINDFL_FHE_CKKS_RNS_HPP
