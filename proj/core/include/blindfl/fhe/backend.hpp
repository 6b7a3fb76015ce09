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

#ifndef BLINDFL_FHE_BACKEND_HPP
#define BLINDFL_FHE_BACKEND_HPP

#include <span>
#include <vector>

#include "blindfl/fhe/ciphertext.hpp"
#include "blindfl/fhe/keys.hpp"
#include "blindfl/fhe/params.hpp"
#include "blindfl/model.hpp"
#include "blindfl/rng.hpp"

namespace blindfl::fhe {

/// Operation contract shared by the exact oracle backend and the leveled
/// approximate backend. Both enforce identical metadata rules (round tags,
/// level accounting, magnitude bounds); they differ only in noise.
class FheBackend {
 public:
  virtual ~FheBackend() = default;

  virtual Scheme scheme() const = 0;

  /// Fresh key pair tagged with `round_id`. Deterministic given the rng seed.
  virtual FheKeyPair keygen(const FheParams& params, Rng& rng,
                            std::uint64_t round_id) const = 0;

  /// values.size() <= slot capacity; |value| <= kValueBound. The rng feeds
  /// the encryption randomness; callers that need reproducible simulations
  /// pass a per-client seeded stream.
  virtual Ciphertext encrypt_vector(const PublicKey& pk,
                                    std::span<const double> values,
                                    Rng& rng) const = 0;

  /// Rejects a key whose round tag differs from the ciphertext's before any
  /// arithmetic happens.
  virtual std::vector<double> decrypt_vector(const SecretKey& sk,
                                             const Ciphertext& ct) const = 0;

  /// Elementwise sum; both operands must share round, level and scale.
  virtual Ciphertext add(const Ciphertext& a, const Ciphertext& b) const = 0;

  /// Elementwise product with a plaintext vector; consumes one level.
  virtual Ciphertext mul_plain(const Ciphertext& ct,
                               std::span<const double> plain) const = 0;

  /// Product with a plaintext scalar; consumes one level.
  virtual Ciphertext mul_plain(const Ciphertext& ct, double scalar) const = 0;
};

/// Singleton backend per scheme.
const FheBackend& backend_for(Scheme scheme);

/// A parameter matrix encrypted as slot-capacity chunks.
struct EncryptedMatrix {
  int index = 0;
  std::vector<int> shape;
  Role role = Role::Weight;
  std::vector<Ciphertext> chunks;

  std::uint64_t round_id() const;
};

std::size_t chunk_count_for(std::size_t value_count, std::uint32_t slot_capacity);

/// Splits the matrix into ceil(len / slot_capacity) chunks; the last chunk
/// is implicitly zero-padded to capacity inside the encoding.
EncryptedMatrix encrypt_matrix(const FheBackend& backend, const PublicKey& pk,
                               const ParamMatrix& m, Rng& rng);

/// Exact inverse of encrypt_matrix up to the backend's decryption noise.
ParamMatrix decrypt_matrix(const FheBackend& backend, const SecretKey& sk,
                           const EncryptedMatrix& em);

}  // namespace blindfl::fhe

#endif  // BLINDFL_FHE_BACKEND_HPP
