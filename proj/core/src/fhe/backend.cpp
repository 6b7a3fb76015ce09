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

#include "blindfl/fhe/backend.hpp"

#include <algorithm>

#include "blindfl/errors.hpp"

namespace blindfl::fhe {

const FheBackend& oracle_backend_instance();
const FheBackend& ckks_backend_instance();

const FheBackend& backend_for(Scheme scheme) {
  switch (scheme) {
    case Scheme::Oracle: return oracle_backend_instance();
    case Scheme::Ckks: return ckks_backend_instance();
  }
  throw InvalidArgument("unknown scheme");
}

std::uint64_t EncryptedMatrix::round_id() const {
  if (chunks.empty()) return 0;
  return chunks.front().round_id;
}

std::size_t chunk_count_for(std::size_t value_count, std::uint32_t slot_capacity) {
  if (slot_capacity == 0) throw InvalidArgument("slot capacity must be positive");
  return (value_count + slot_capacity - 1) / slot_capacity;
}

EncryptedMatrix encrypt_matrix(const FheBackend& backend, const PublicKey& pk,
                               const ParamMatrix& m, Rng& rng) {
  m.validate();
  const std::uint32_t cap = pk.params.slot_capacity();
  const std::size_t chunks = chunk_count_for(m.values.size(), cap);

  EncryptedMatrix out;
  out.index = m.index;
  out.shape = m.shape;
  out.role = m.role;
  out.chunks.reserve(chunks);
  for (std::size_t i = 0; i < chunks; ++i) {
    const std::size_t lo = i * cap;
    const std::size_t hi = std::min(m.values.size(), lo + cap);
    std::span<const double> slice(m.values.data() + lo, hi - lo);
    Ciphertext ct = backend.encrypt_vector(pk, slice, rng);
    ct.chunk_index = static_cast<std::uint32_t>(i);
    ct.chunk_count = static_cast<std::uint32_t>(chunks);
    out.chunks.push_back(std::move(ct));
  }
  return out;
}

ParamMatrix decrypt_matrix(const FheBackend& backend, const SecretKey& sk,
                           const EncryptedMatrix& em) {
  ParamMatrix m;
  m.index = em.index;
  m.shape = em.shape;
  m.role = em.role;

  std::size_t expected = 1;
  for (int d : em.shape) expected *= static_cast<std::size_t>(d);

  if (!em.chunks.empty()) {
    const std::uint32_t declared = em.chunks.front().chunk_count;
    if (em.chunks.size() != declared) {
      throw InvalidArgument("matrix is missing ciphertext chunks");
    }
    m.values.reserve(expected);
    for (std::size_t i = 0; i < em.chunks.size(); ++i) {
      const Ciphertext& ct = em.chunks[i];
      if (ct.chunk_index != i || ct.chunk_count != declared) {
        throw InvalidArgument("ciphertext chunks out of order");
      }
      if (ct.round_id != em.chunks.front().round_id) {
        throw RoundMismatch("matrix chunks span multiple rounds");
      }
      auto values = backend.decrypt_vector(sk, ct);
      m.values.insert(m.values.end(), values.begin(), values.end());
    }
  }
  if (m.values.size() != expected) {
    throw ShapeMismatch("decrypted value count does not match the matrix shape");
  }
  return m;
}

}  // namespace blindfl::fhe
