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

#ifndef BLINDFL_FHE_KEYS_HPP
#define BLINDFL_FHE_KEYS_HPP

#include <cstdint>
#include <span>

#include "blindfl/bytes.hpp"
#include "blindfl/fhe/ckks/rns.hpp"
#include "blindfl/fhe/params.hpp"

namespace blindfl::fhe {

/// Encryption + encoding material. Bound to exactly one round.
struct PublicKey {
  FheParams params;
  std::uint64_t round_id = 0;
  ckks::RnsPoly b;  ///< -(a*s) + e, NTT domain, full chain
  ckks::RnsPoly a;  ///< uniform, NTT domain, full chain
};

/// Decryption material. Bound to exactly one round.
struct SecretKey {
  FheParams params;
  std::uint64_t round_id = 0;
  ckks::RnsPoly s;  ///< ternary secret, NTT domain, full chain
};

struct FheKeyPair {
  PublicKey public_key;
  SecretKey secret_key;
  std::uint64_t round_id = 0;
};

// Versioned "BFPK"/"BFSK" containers, crc-terminated like ciphertexts.
Bytes serialize_public_key(const PublicKey& pk);
PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes);
Bytes serialize_secret_key(const SecretKey& sk);
SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes);

}  // namespace blindfl::fhe

#endif  // BLINDFL_FHE_KEYS_HPP
