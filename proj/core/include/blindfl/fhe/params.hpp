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

#ifndef BLINDFL_FHE_PARAMS_HPP
#define BLINDFL_FHE_PARAMS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace blindfl::fhe {

enum class Scheme : std::uint8_t {
  Oracle = 0,  ///< exact plaintext reference backend (zero noise)
  Ckks = 1,    ///< approximate leveled backend over packed real slots
};

enum class SecurityNote : std::uint8_t {
  Production = 0,
  Test = 1,  ///< reduced ring dimension; never deploy
};

/// Leveled-scheme parameters. The modulus chain is given as prime bit
/// lengths: two outer primes bracket one inner prime per multiplicative
/// level, e.g. [60, 40, 40, 60] supports depth 2.
struct FheParams {
  Scheme scheme = Scheme::Ckks;
  std::uint32_t ring_dim = 1u << 14;  ///< polynomial degree n, power of two
  std::uint32_t scale_log2 = 20;      ///< declared fixed-point upscale 2^scale_log2
  std::vector<int> modulus_chain_bits = {60, 40, 40, 60};
  SecurityNote security = SecurityNote::Test;

  std::uint32_t slot_capacity() const { return ring_dim / 2; }

  /// Multiplicative levels = inner primes = chain length minus the two
  /// outer primes.
  int levels() const { return static_cast<int>(modulus_chain_bits.size()) - 2; }

  /// Throws InvalidArgument on an unsupported combination.
  void validate() const;

  bool operator==(const FheParams&) const = default;

  /// n = 2^14, scale 2^20, chain [60, 40, 40, 60]: the default context for
  /// real runs (128-bit-class ring dimension).
  static FheParams production_context();

  /// n = 2^12 variant of the production context for fast test runs.
  /// Carries an explicit Test security note.
  static FheParams test_context();
};

/// Magnitude bound enforced by encrypt_vector on slot values.
inline constexpr double kValueBound = 1024.0;  // 2^10

/// Magnitude bound enforced by mul_plain on plaintext operands.
inline constexpr double kPlainBound = 1048576.0;  // 2^20

std::string to_string(Scheme s);
std::string to_string(SecurityNote s);

}  // namespace blindfl::fhe

#endif  // BLINDFL_FHE_PARAMS_HPP
