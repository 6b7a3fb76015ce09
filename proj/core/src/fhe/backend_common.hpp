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

#ifndef BLINDFL_SRC_FHE_BACKEND_COMMON_HPP
#define BLINDFL_SRC_FHE_BACKEND_COMMON_HPP

#include <cmath>
#include <span>
#include <string>

#include "blindfl/errors.hpp"
#include "blindfl/fhe/ciphertext.hpp"
#include "blindfl/fhe/params.hpp"

namespace blindfl::fhe::detail {

// Metadata rules shared by both backends so the oracle exercises exactly
// the contract the leveled scheme implements.

inline void check_encrypt_input(const FheParams& params,
                                std::span<const double> values) {
  if (values.size() > params.slot_capacity()) {
    throw InvalidArgument("vector of " + std::to_string(values.size()) +
                          " values overflows slot capacity " +
                          std::to_string(params.slot_capacity()));
  }
  for (double v : values) {
    if (!std::isfinite(v) || std::abs(v) > kValueBound) {
      throw InvalidArgument("slot value exceeds the magnitude bound");
    }
  }
}

inline void check_key_round(std::uint64_t key_round, const Ciphertext& ct) {
  if (key_round != ct.round_id) {
    throw RoundMismatch("key round " + std::to_string(key_round) +
                        " does not match ciphertext round " +
                        std::to_string(ct.round_id));
  }
}

inline void check_add_compatible(const Ciphertext& a, const Ciphertext& b) {
  if (a.scheme != b.scheme) throw InvalidArgument("mixed-scheme addition");
  if (a.round_id != b.round_id) {
    throw RoundMismatch("cannot add ciphertexts from rounds " +
                        std::to_string(a.round_id) + " and " +
                        std::to_string(b.round_id));
  }
  if (a.level != b.level) throw InvalidArgument("level mismatch in addition");
  if (a.scale_log2 != b.scale_log2) {
    throw InvalidArgument("scale mismatch in addition");
  }
  if (a.value_count != b.value_count || a.chunk_index != b.chunk_index ||
      a.chunk_count != b.chunk_count) {
    throw InvalidArgument("chunk layout mismatch in addition");
  }
}

inline void check_mul_plain(const Ciphertext& ct, std::size_t plain_size,
                            bool is_vector) {
  if (ct.level < 1) {
    throw LevelExhausted("modulus chain exhausted: no level left to rescale");
  }
  if (is_vector && plain_size != ct.value_count) {
    throw InvalidArgument("plaintext vector length must equal the slot count");
  }
}

inline void check_plain_value(double v) {
  if (!std::isfinite(v) || std::abs(v) > kPlainBound) {
    throw InvalidArgument("plaintext operand exceeds the magnitude bound");
  }
}

}  // namespace blindfl::fhe::detail

#endif  // BLINDFL_SRC_FHE_BACKEND_COMMON_HPP
