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
#include "fhe/backend_common.hpp"

namespace blindfl::fhe {

/// Reference backend: plaintext slots behind the full leveled-scheme
/// contract. Level accounting, round tags and magnitude bounds behave
/// exactly as in the real scheme; arithmetic is exact (tau = 0). Every
/// encrypted-path test runs against this and the leveled backend and
/// compares.
class OracleBackend final : public FheBackend {
 public:
  Scheme scheme() const override { return Scheme::Oracle; }

  FheKeyPair keygen(const FheParams& params, Rng& rng,
                    std::uint64_t round_id) const override {
    params.validate();
    (void)rng;  // no key material; determinism is trivial
    FheParams p = params;
    p.scheme = Scheme::Oracle;
    FheKeyPair kp;
    kp.round_id = round_id;
    kp.public_key = PublicKey{p, round_id, {}, {}};
    kp.secret_key = SecretKey{p, round_id, {}};
    return kp;
  }

  Ciphertext encrypt_vector(const PublicKey& pk, std::span<const double> values,
                            Rng& rng) const override {
    detail::check_encrypt_input(pk.params, values);
    (void)rng;
    Ciphertext ct;
    ct.scheme = Scheme::Oracle;
    ct.params = pk.params;
    ct.round_id = pk.round_id;
    ct.level = pk.params.levels();
    ct.scale_log2 = pk.params.scale_log2 + ckks::kScaleBoostLog2;
    ct.value_count = static_cast<std::uint32_t>(values.size());
    ct.oracle_slots.assign(values.begin(), values.end());
    return ct;
  }

  std::vector<double> decrypt_vector(const SecretKey& sk,
                                     const Ciphertext& ct) const override {
    detail::check_key_round(sk.round_id, ct);
    if (ct.scheme != Scheme::Oracle) {
      throw InvalidArgument("ciphertext/key scheme mismatch");
    }
    return ct.oracle_slots;
  }

  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const override {
    detail::check_add_compatible(a, b);
    Ciphertext out = a;
    for (std::size_t i = 0; i < out.oracle_slots.size(); ++i) {
      out.oracle_slots[i] += b.oracle_slots[i];
    }
    return out;
  }

  Ciphertext mul_plain(const Ciphertext& ct,
                       std::span<const double> plain) const override {
    detail::check_mul_plain(ct, plain.size(), /*is_vector=*/true);
    for (double v : plain) detail::check_plain_value(v);
    Ciphertext out = ct;
    for (std::size_t i = 0; i < out.oracle_slots.size(); ++i) {
      out.oracle_slots[i] *= plain[i];
    }
    out.level -= 1;
    return out;
  }

  Ciphertext mul_plain(const Ciphertext& ct, double scalar) const override {
    detail::check_mul_plain(ct, 1, /*is_vector=*/false);
    detail::check_plain_value(scalar);
    Ciphertext out = ct;
    for (double& v : out.oracle_slots) v *= scalar;
    out.level -= 1;
    return out;
  }
};

const FheBackend& oracle_backend_instance() {
  static const OracleBackend instance;
  return instance;
}

}  // namespace blindfl::fhe
