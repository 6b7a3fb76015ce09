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

#include <cmath>
#include <vector>

#include "blindfl/fhe/backend.hpp"
#include "blindfl/fhe/ckks/embedding.hpp"
#include "blindfl/fhe/ckks/rns.hpp"
#include "fhe/backend_common.hpp"

namespace blindfl::fhe {

namespace {

using ckks::Modulus;
using ckks::RnsContext;
using ckks::RnsPoly;
using ckks::SlotEncoder;
using ckks::U320;

constexpr double kNoiseStddev = 3.2;
constexpr int kNoiseClamp = 19;  // ~6 sigma

long double effective_scale(std::uint32_t scale_log2) {
  return std::ldexp(1.0L, static_cast<int>(scale_log2));
}

/// Samples n small signed integers and reduces them per active prime,
/// returning the NTT-domain poly.
RnsPoly small_poly_to_ntt(const RnsContext& ctx,
                          const std::vector<std::int64_t>& coeffs,
                          const std::vector<std::size_t>& active) {
  RnsPoly out;
  out.residues.reserve(active.size());
  for (std::size_t idx : active) {
    const Modulus& mod = ctx.modulus(idx);
    std::vector<std::uint64_t> res(coeffs.size());
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      res[t] = mod.from_signed(coeffs[t]);
    }
    ctx.ntt(idx).forward(res);
    out.residues.push_back(std::move(res));
  }
  return out;
}

std::vector<std::int64_t> sample_ternary(Rng& rng, std::uint32_t n) {
  std::vector<std::int64_t> v(n);
  for (auto& x : v) x = static_cast<std::int64_t>(rng.below(3)) - 1;
  return v;
}

std::vector<std::int64_t> sample_noise(Rng& rng, std::uint32_t n) {
  std::vector<std::int64_t> v(n);
  for (auto& x : v) {
    auto e = static_cast<std::int64_t>(std::llround(rng.gaussian(0.0, kNoiseStddev)));
    if (e > kNoiseClamp) e = kNoiseClamp;
    if (e < -kNoiseClamp) e = -kNoiseClamp;
    x = e;
  }
  return v;
}

/// Encodes integer coefficients into NTT-domain residues for `active`.
RnsPoly coeffs_to_ntt(const RnsContext& ctx, const std::vector<__int128>& coeffs,
                      const std::vector<std::size_t>& active) {
  RnsPoly out;
  out.residues.reserve(active.size());
  for (std::size_t idx : active) {
    const Modulus& mod = ctx.modulus(idx);
    std::vector<std::uint64_t> res(coeffs.size());
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      res[t] = mod.from_i128(coeffs[t]);
    }
    ctx.ntt(idx).forward(res);
    out.residues.push_back(std::move(res));
  }
  return out;
}

RnsPoly pointwise(const RnsContext& ctx, const RnsPoly& a, const RnsPoly& b,
                  const std::vector<std::size_t>& active,
                  std::uint64_t (Modulus::*op)(std::uint64_t, std::uint64_t) const) {
  RnsPoly out;
  out.residues.resize(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    const Modulus& mod = ctx.modulus(active[k]);
    const auto& ra = a.residues[k];
    const auto& rb = b.residues[k];
    auto& ro = out.residues[k];
    ro.resize(ra.size());
    for (std::size_t t = 0; t < ra.size(); ++t) ro[t] = (mod.*op)(ra[t], rb[t]);
  }
  return out;
}

/// Divides a component by the dropped prime: c' = (c - [c]_p) / p, with the
/// centered residue [c]_p lifted into each remaining prime. Input and output
/// stay in the NTT domain.
RnsPoly rescale_component(const RnsContext& ctx, const RnsPoly& comp, int level) {
  const auto& kept = ctx.active_indices(level - 1);
  const auto& inverses = ctx.rescale_inverses(level);
  const std::size_t drop_pos = static_cast<std::size_t>(level);
  const std::size_t drop_idx = ctx.drop_index(level);
  const Modulus& drop_mod = ctx.modulus(drop_idx);

  // centered coefficients of the dropped residue
  std::vector<std::uint64_t> dropped = comp.residues[drop_pos];
  ctx.ntt(drop_idx).inverse(dropped);
  std::vector<std::int64_t> centered(dropped.size());
  for (std::size_t t = 0; t < dropped.size(); ++t) {
    centered[t] = drop_mod.to_signed(dropped[t]);
  }

  RnsPoly out;
  out.residues.resize(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t idx = kept[k];
    const Modulus& mod = ctx.modulus(idx);
    // old position of this prime in the level-`level` layout
    const std::size_t old_pos = k < drop_pos ? k : k + 1;
    std::vector<std::uint64_t> lifted(centered.size());
    for (std::size_t t = 0; t < centered.size(); ++t) {
      lifted[t] = mod.from_signed(centered[t]);
    }
    ctx.ntt(idx).forward(lifted);
    const auto& src = comp.residues[old_pos];
    auto& dst = out.residues[k];
    dst.resize(src.size());
    const std::uint64_t p_inv = inverses[k];
    for (std::size_t t = 0; t < src.size(); ++t) {
      dst[t] = mod.mul(mod.sub(src[t], lifted[t]), p_inv);
    }
  }
  return out;
}

}  // namespace

class CkksBackend final : public FheBackend {
 public:
  Scheme scheme() const override { return Scheme::Ckks; }

  FheKeyPair keygen(const FheParams& params, Rng& rng,
                    std::uint64_t round_id) const override {
    params.validate();
    FheParams p = params;
    p.scheme = Scheme::Ckks;
    auto ctx = RnsContext::get(p);
    const auto& active = ctx->active_indices(ctx->max_level());
    const std::uint32_t n = p.ring_dim;

    RnsPoly s = small_poly_to_ntt(*ctx, sample_ternary(rng, n), active);

    RnsPoly a;
    a.residues.reserve(active.size());
    for (std::size_t idx : active) {
      const Modulus& mod = ctx->modulus(idx);
      std::vector<std::uint64_t> res(n);
      for (auto& x : res) x = rng.below(mod.q);
      a.residues.push_back(std::move(res));  // uniform in NTT domain
    }

    RnsPoly e = small_poly_to_ntt(*ctx, sample_noise(rng, n), active);

    RnsPoly b;
    b.residues.resize(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
      const Modulus& mod = ctx->modulus(active[k]);
      auto& rb = b.residues[k];
      rb.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        rb[t] = mod.sub(e.residues[k][t], mod.mul(a.residues[k][t], s.residues[k][t]));
      }
    }

    FheKeyPair kp;
    kp.round_id = round_id;
    kp.public_key = PublicKey{p, round_id, std::move(b), std::move(a)};
    kp.secret_key = SecretKey{p, round_id, std::move(s)};
    return kp;
  }

  Ciphertext encrypt_vector(const PublicKey& pk, std::span<const double> values,
                            Rng& rng) const override {
    detail::check_encrypt_input(pk.params, values);
    if (pk.b.empty()) {
      throw InvalidArgument("public key carries no encryption material");
    }
    auto ctx = RnsContext::get(pk.params);
    auto encoder = SlotEncoder::get(pk.params.ring_dim);
    const int level = ctx->max_level();
    const auto& active = ctx->active_indices(level);
    const std::uint32_t n = pk.params.ring_dim;
    const std::uint32_t scale_exp = pk.params.scale_log2 + ckks::kScaleBoostLog2;

    RnsPoly m = coeffs_to_ntt(*ctx, encoder->encode(values, effective_scale(scale_exp)),
                              active);

    RnsPoly u = small_poly_to_ntt(*ctx, sample_ternary(rng, n), active);
    RnsPoly e0 = small_poly_to_ntt(*ctx, sample_noise(rng, n), active);
    RnsPoly e1 = small_poly_to_ntt(*ctx, sample_noise(rng, n), active);

    Ciphertext ct;
    ct.scheme = Scheme::Ckks;
    ct.params = pk.params;
    ct.round_id = pk.round_id;
    ct.level = level;
    ct.scale_log2 = scale_exp;
    ct.value_count = static_cast<std::uint32_t>(values.size());
    ct.c0.residues.resize(active.size());
    ct.c1.residues.resize(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
      const Modulus& mod = ctx->modulus(active[k]);
      auto& r0 = ct.c0.residues[k];
      auto& r1 = ct.c1.residues[k];
      r0.resize(n);
      r1.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        r0[t] = mod.add(mod.add(mod.mul(pk.b.residues[k][t], u.residues[k][t]),
                                e0.residues[k][t]),
                        m.residues[k][t]);
        r1[t] = mod.add(mod.mul(pk.a.residues[k][t], u.residues[k][t]),
                        e1.residues[k][t]);
      }
    }
    return ct;
  }

  std::vector<double> decrypt_vector(const SecretKey& sk,
                                     const Ciphertext& ct) const override {
    detail::check_key_round(sk.round_id, ct);
    if (ct.scheme != Scheme::Ckks || sk.s.empty()) {
      throw InvalidArgument("ciphertext/key scheme mismatch");
    }
    auto ctx = RnsContext::get(ct.params);
    auto encoder = SlotEncoder::get(ct.params.ring_dim);
    const auto& active = ctx->active_indices(ct.level);
    const auto& crt = ctx->crt(ct.level);
    const std::uint32_t n = ct.params.ring_dim;

    // d = c0 + c1 * s, then back to the coefficient domain per prime
    std::vector<std::vector<std::uint64_t>> d(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t idx = active[k];
      const Modulus& mod = ctx->modulus(idx);
      // the secret key is stored at the full chain, where position == index
      const auto& s_res = sk.s.residues[idx];
      auto& dk = d[k];
      dk.resize(n);
      for (std::size_t t = 0; t < n; ++t) {
        dk[t] = mod.add(ct.c0.residues[k][t],
                        mod.mul(ct.c1.residues[k][t], s_res[t]));
      }
      ctx->ntt(idx).inverse(dk);
    }

    // CRT-reconstruct each coefficient, center, and descale.
    const long double scale = effective_scale(ct.scale_log2);
    std::vector<long double> coeffs(n);
    for (std::uint32_t t = 0; t < n; ++t) {
      U320 acc{};
      for (std::size_t k = 0; k < active.size(); ++k) {
        const Modulus& mod = ctx->modulus(active[k]);
        const std::uint64_t term = mod.mul(d[k][t], crt.inv_q_over_qi[k]);
        acc.add(crt.q_over_qi[k].mul_u64(term));
      }
      while (acc >= crt.q) acc.sub(crt.q);
      long double v;
      if (crt.q_half < acc) {
        U320 neg = crt.q;
        neg.sub(acc);
        v = -neg.to_long_double();
      } else {
        v = acc.to_long_double();
      }
      coeffs[t] = v / scale;
    }
    return encoder->decode(coeffs, ct.value_count);
  }

  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const override {
    detail::check_add_compatible(a, b);
    auto ctx = RnsContext::get(a.params);
    const auto& active = ctx->active_indices(a.level);
    Ciphertext out = a;
    out.c0 = pointwise(*ctx, a.c0, b.c0, active, &Modulus::add);
    out.c1 = pointwise(*ctx, a.c1, b.c1, active, &Modulus::add);
    return out;
  }

  Ciphertext mul_plain(const Ciphertext& ct,
                       std::span<const double> plain) const override {
    detail::check_mul_plain(ct, plain.size(), /*is_vector=*/true);
    for (double v : plain) detail::check_plain_value(v);
    auto ctx = RnsContext::get(ct.params);
    auto encoder = SlotEncoder::get(ct.params.ring_dim);
    const auto& active = ctx->active_indices(ct.level);
    // Encoding the operand at exactly the dropped prime keeps the effective
    // scale unchanged through the rescale.
    const std::uint64_t p = ctx->modulus(ctx->drop_index(ct.level)).q;
    RnsPoly plain_ntt = coeffs_to_ntt(
        *ctx, encoder->encode(plain, static_cast<long double>(p)), active);
    return apply_plain_product(*ctx, ct, plain_ntt);
  }

  Ciphertext mul_plain(const Ciphertext& ct, double scalar) const override {
    detail::check_mul_plain(ct, 1, /*is_vector=*/false);
    detail::check_plain_value(scalar);
    auto ctx = RnsContext::get(ct.params);
    const auto& active = ctx->active_indices(ct.level);
    const std::uint64_t p = ctx->modulus(ctx->drop_index(ct.level)).q;
    // A constant polynomial evaluates to itself in every slot, so its NTT
    // form is the constant residue everywhere.
    const auto c = static_cast<__int128>(
        llroundl(static_cast<long double>(scalar) * static_cast<long double>(p)));
    RnsPoly plain_ntt;
    plain_ntt.residues.reserve(active.size());
    for (std::size_t idx : active) {
      plain_ntt.residues.emplace_back(ct.params.ring_dim,
                                      ctx->modulus(idx).from_i128(c));
    }
    return apply_plain_product(*ctx, ct, plain_ntt);
  }

 private:
  static Ciphertext apply_plain_product(const RnsContext& ctx, const Ciphertext& ct,
                                        const RnsPoly& plain_ntt) {
    const auto& active = ctx.active_indices(ct.level);
    Ciphertext out = ct;
    out.c0 = pointwise(ctx, ct.c0, plain_ntt, active, &Modulus::mul);
    out.c1 = pointwise(ctx, ct.c1, plain_ntt, active, &Modulus::mul);
    out.c0 = rescale_component(ctx, out.c0, ct.level);
    out.c1 = rescale_component(ctx, out.c1, ct.level);
    out.level = ct.level - 1;
    return out;
  }
};

const FheBackend& ckks_backend_instance() {
  static const CkksBackend instance;
  return instance;
}

}  // namespace blindfl::fhe
