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

#include "blindfl/fhe/params.hpp"

#include "blindfl/errors.hpp"
#include "blindfl/fhe/ckks/rns.hpp"

namespace blindfl::fhe {

void FheParams::validate() const {
  if (ring_dim < 16 || (ring_dim & (ring_dim - 1)) != 0) {
    throw InvalidArgument("ring_dim must be a power of two >= 16");
  }
  if (ring_dim > (1u << 16)) {
    throw InvalidArgument("ring_dim above 2^16 is not supported");
  }
  if (modulus_chain_bits.size() < 2) {
    throw InvalidArgument("modulus chain needs at least the two outer primes");
  }
  for (int bits : modulus_chain_bits) {
    if (bits < 20 || bits > 60) {
      throw InvalidArgument("modulus chain primes must be 20..60 bits");
    }
  }
  if (scale_log2 < 10 || scale_log2 > 40) {
    throw InvalidArgument("scale must be between 2^10 and 2^40");
  }
  // The two outer primes must leave room for the boosted scale plus the
  // value bound once every level has been consumed.
  int outer_bits = modulus_chain_bits.front() + modulus_chain_bits.back();
  int needed = static_cast<int>(scale_log2) + ckks::kScaleBoostLog2 + 12;
  if (outer_bits < needed) {
    throw InvalidArgument("outer primes too small for the requested scale");
  }
}

FheParams FheParams::production_context() {
  FheParams p;
  p.scheme = Scheme::Ckks;
  p.ring_dim = 1u << 14;
  p.scale_log2 = 20;
  p.modulus_chain_bits = {60, 40, 40, 60};
  p.security = SecurityNote::Production;
  return p;
}

FheParams FheParams::test_context() {
  FheParams p = production_context();
  p.ring_dim = 1u << 12;
  p.security = SecurityNote::Test;
  return p;
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Oracle: return "oracle";
    case Scheme::Ckks: return "ckks";
  }
  return "unknown";
}

std::string to_string(SecurityNote s) {
  return s == SecurityNote::Production ? "production" : "test";
}

}  // namespace blindfl::fhe
