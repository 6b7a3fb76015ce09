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

#include "blindfl/bytes.hpp"
#include "blindfl/errors.hpp"
#include "blindfl/fhe/ciphertext.hpp"
#include "blindfl/fhe/keys.hpp"

namespace blindfl::fhe {

namespace {

void write_params(ByteWriter& w, const FheParams& p) {
  w.u32(p.ring_dim);
  w.u32(p.scale_log2);
  w.u8(static_cast<std::uint8_t>(p.security));
  w.u8(static_cast<std::uint8_t>(p.modulus_chain_bits.size()));
  for (int bits : p.modulus_chain_bits) w.u8(static_cast<std::uint8_t>(bits));
}

FheParams read_params(ByteReader& r, Scheme scheme) {
  FheParams p;
  p.scheme = scheme;
  p.ring_dim = r.u32();
  p.scale_log2 = r.u32();
  p.security = static_cast<SecurityNote>(r.u8());
  const std::uint8_t chain_len = r.u8();
  p.modulus_chain_bits.clear();
  for (std::uint8_t i = 0; i < chain_len; ++i) {
    p.modulus_chain_bits.push_back(static_cast<int>(r.u8()));
  }
  p.validate();
  return p;
}

void write_poly(ByteWriter& w, const ckks::RnsPoly& poly, std::uint32_t ring_dim) {
  w.u8(static_cast<std::uint8_t>(poly.residues.size()));
  for (const auto& res : poly.residues) {
    if (res.size() != ring_dim) throw InvalidArgument("residue length mismatch");
    for (std::uint64_t limb : res) w.u64(limb);
  }
}

ckks::RnsPoly read_poly(ByteReader& r, std::uint32_t ring_dim) {
  ckks::RnsPoly poly;
  const std::uint8_t count = r.u8();
  poly.residues.resize(count);
  for (auto& res : poly.residues) {
    res.resize(ring_dim);
    for (auto& limb : res) limb = r.u64();
  }
  return poly;
}

Scheme read_scheme(std::uint8_t tag) {
  if (tag != 0 && tag != 1) {
    throw CodecError(CodecError::Kind::Malformed, "unknown scheme tag");
  }
  return static_cast<Scheme>(tag);
}

}  // namespace

Bytes serialize_ciphertext(const Ciphertext& ct) {
  ByteWriter payload;
  write_params(payload, ct.params);
  payload.u32(ct.value_count);
  if (ct.scheme == Scheme::Oracle) {
    payload.u32(static_cast<std::uint32_t>(ct.oracle_slots.size()));
    for (double v : ct.oracle_slots) payload.f64(v);
  } else {
    payload.u8(2);  // component count
    write_poly(payload, ct.c0, ct.params.ring_dim);
    write_poly(payload, ct.c1, ct.params.ring_dim);
  }

  ByteWriter w;
  w.literal("BFHE");
  w.u8(kCiphertextFormatVersion);
  w.u8(static_cast<std::uint8_t>(ct.scheme));
  w.u64(ct.round_id);
  w.u8(static_cast<std::uint8_t>(ct.level));
  w.u32(ct.chunk_index);
  w.u32(ct.chunk_count);
  w.u16(static_cast<std::uint16_t>(ct.scale_log2));
  w.u64(payload.size());
  w.bytes(payload.data());
  w.checksum();
  return std::move(w).take();
}

Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_literal("BFHE", "ciphertext");
  const std::uint8_t version = r.u8();
  if (version != kCiphertextFormatVersion) {
    throw CodecError(CodecError::Kind::BadVersion,
                     "unsupported ciphertext format version " +
                         std::to_string(version));
  }
  Ciphertext ct;
  ct.scheme = read_scheme(r.u8());
  ct.round_id = r.u64();
  ct.level = static_cast<int>(r.u8());
  ct.chunk_index = r.u32();
  ct.chunk_count = r.u32();
  ct.scale_log2 = r.u16();
  const std::uint64_t payload_len = r.u64();
  auto payload_bytes = r.take(payload_len);
  r.verify_checksum();
  if (r.remaining() != 0) {
    throw CodecError(CodecError::Kind::Malformed, "trailing bytes after ciphertext");
  }

  ByteReader pr(payload_bytes);
  ct.params = read_params(pr, ct.scheme);
  ct.value_count = pr.u32();
  if (ct.level < 0 || ct.level > ct.params.levels()) {
    throw CodecError(CodecError::Kind::Malformed, "ciphertext level out of range");
  }
  if (ct.value_count > ct.params.slot_capacity()) {
    throw CodecError(CodecError::Kind::Malformed, "value count exceeds slot capacity");
  }
  if (ct.scheme == Scheme::Oracle) {
    const std::uint32_t count = pr.u32();
    ct.oracle_slots.resize(count);
    for (auto& v : ct.oracle_slots) v = pr.f64();
  } else {
    if (pr.u8() != 2) {
      throw CodecError(CodecError::Kind::Malformed, "unexpected component count");
    }
    ct.c0 = read_poly(pr, ct.params.ring_dim);
    ct.c1 = read_poly(pr, ct.params.ring_dim);
    const std::size_t expect_primes = static_cast<std::size_t>(ct.level) + 2;
    if (ct.c0.residues.size() != expect_primes ||
        ct.c1.residues.size() != expect_primes) {
      throw CodecError(CodecError::Kind::Malformed,
                       "residue count does not match the ciphertext level");
    }
  }
  if (pr.remaining() != 0) {
    throw CodecError(CodecError::Kind::Malformed, "trailing bytes in payload");
  }
  return ct;
}

namespace {

Bytes serialize_key_common(const char* magic, const FheParams& params,
                           std::uint64_t round_id,
                           std::span<const ckks::RnsPoly* const> polys) {
  ByteWriter w;
  w.literal(magic);
  w.u8(kCiphertextFormatVersion);
  w.u8(static_cast<std::uint8_t>(params.scheme));
  w.u64(round_id);
  write_params(w, params);
  for (const auto* poly : polys) write_poly(w, *poly, params.ring_dim);
  w.checksum();
  return std::move(w).take();
}

}  // namespace

Bytes serialize_public_key(const PublicKey& pk) {
  const ckks::RnsPoly* polys[] = {&pk.b, &pk.a};
  return serialize_key_common("BFPK", pk.params, pk.round_id, polys);
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_literal("BFPK", "public key");
  const std::uint8_t version = r.u8();
  if (version != kCiphertextFormatVersion) {
    throw CodecError(CodecError::Kind::BadVersion, "unsupported key format version");
  }
  PublicKey pk;
  Scheme scheme = read_scheme(r.u8());
  pk.round_id = r.u64();
  pk.params = read_params(r, scheme);
  pk.b = read_poly(r, pk.params.ring_dim);
  pk.a = read_poly(r, pk.params.ring_dim);
  r.verify_checksum();
  return pk;
}

Bytes serialize_secret_key(const SecretKey& sk) {
  const ckks::RnsPoly* polys[] = {&sk.s};
  return serialize_key_common("BFSK", sk.params, sk.round_id, polys);
}

SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_literal("BFSK", "secret key");
  const std::uint8_t version = r.u8();
  if (version != kCiphertextFormatVersion) {
    throw CodecError(CodecError::Kind::BadVersion, "unsupported key format version");
  }
  SecretKey sk;
  Scheme scheme = read_scheme(r.u8());
  sk.round_id = r.u64();
  sk.params = read_params(r, scheme);
  sk.s = read_poly(r, sk.params.ring_dim);
  r.verify_checksum();
  return sk;
}

}  // namespace blindfl::fhe
