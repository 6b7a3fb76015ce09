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

#ifndef BLINDFL_FHE_CIPHERTEXT_HPP
#define BLINDFL_FHE_CIPHERTEXT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "blindfl/bytes.hpp"
#include "blindfl/fhe/ckks/rns.hpp"
#include "blindfl/fhe/params.hpp"

namespace blindfl::fhe {

/// One packed-slot ciphertext, possibly one chunk of a larger matrix.
///
/// The round id rides along as authenticated-cleartext metadata; every
/// operation rejects mixed rounds before touching payload data.
struct Ciphertext {
  Scheme scheme = Scheme::Oracle;
  FheParams params;
  std::uint64_t round_id = 0;
  int level = 0;               ///< remaining rescale budget
  std::uint32_t scale_log2 = 0;  ///< effective scale exponent (boost included)
  std::uint32_t chunk_index = 0;
  std::uint32_t chunk_count = 1;
  std::uint32_t value_count = 0;  ///< meaningful slots in this chunk

  std::vector<double> oracle_slots;  ///< Scheme::Oracle payload
  ckks::RnsPoly c0, c1;              ///< Scheme::Ckks payload
};

/// Versioned "BFHE" container:
/// magic(4) version(1) scheme(1) round(8 LE) level(1) chunk_index(4 LE)
/// chunk_count(4 LE) scale_exponent(2 LE) payload_length(8 LE) payload
/// crc32(4 LE). The payload embeds the parameter block and, for the
/// leveled scheme, each component's residues in little-endian limb order.
Bytes serialize_ciphertext(const Ciphertext& ct);
Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes);

inline constexpr std::uint8_t kCiphertextFormatVersion = 1;

}  // namespace blindfl::fhe

#endif  // BLINDFL_FHE_CIPHERTEXT_HPP
