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

#include "blindfl/fhe/ckks/rns.hpp"

#include <map>
#include <mutex>

#include "blindfl/errors.hpp"
#include "blindfl/fhe/params.hpp"

namespace blindfl::fhe::ckks {

RnsContext::RnsContext(std::uint32_t ring_dim, const std::vector<int>& chain_bits)
    : ring_dim_(ring_dim) {
  if (chain_bits.size() < 2) {
    throw InvalidArgument("modulus chain needs at least the two outer primes");
  }
  std::vector<std::uint64_t> taken;
  for (int bits : chain_bits) {
    std::uint64_t q = pick_ntt_prime(bits, ring_dim, taken);
    taken.push_back(q);
    primes_.push_back(Modulus{q});
  }
  for (const auto& mod : primes_) {
    ntt_.push_back(std::make_unique<NttTables>(ring_dim, mod));
  }

  const int levels = max_level();
  active_.resize(levels + 1);
  for (int l = 0; l <= levels; ++l) {
    active_[l].push_back(0);
    for (int i = 1; i <= l; ++i) active_[l].push_back(static_cast<std::size_t>(i));
    active_[l].push_back(primes_.size() - 1);
  }

  crt_.resize(levels + 1);
  for (int l = 0; l <= levels; ++l) {
    CrtTable& t = crt_[l];
    t.q = U320::from_u64(1);
    for (std::size_t idx : active_[l]) t.q = t.q.mul_u64(primes_[idx].q);
    t.q_half = t.q;
    // halve via limb shift
    for (int i = 0; i < 5; ++i) {
      t.q_half.limb[i] >>= 1;
      if (i + 1 < 5 && (t.q_half.limb[i + 1] & 1u)) {
        t.q_half.limb[i] |= 1ULL << 63;
      }
    }
    for (std::size_t idx : active_[l]) {
      U320 partial = U320::from_u64(1);
      std::uint64_t partial_mod = 1;  // (q / q_idx) mod q_idx
      const Modulus& mi = primes_[idx];
      for (std::size_t other : active_[l]) {
        if (other == idx) continue;
        partial = partial.mul_u64(primes_[other].q);
        partial_mod = mi.mul(partial_mod, primes_[other].q % mi.q);
      }
      t.q_over_qi.push_back(partial);
      t.inv_q_over_qi.push_back(mi.inv(partial_mod));
    }
  }

  rescale_inv_.resize(levels + 1);
  for (int l = 1; l <= levels; ++l) {
    const std::uint64_t p = primes_[drop_index(l)].q;
    for (std::size_t idx : active_[l - 1]) {
      const Modulus& mi = primes_[idx];
      rescale_inv_[l].push_back(mi.inv(p % mi.q));
    }
  }
}

const std::vector<std::size_t>& RnsContext::active_indices(int level) const {
  if (level < 0 || level > max_level()) {
    throw InvalidArgument("level out of range");
  }
  return active_[level];
}

const RnsContext::CrtTable& RnsContext::crt(int level) const {
  if (level < 0 || level > max_level())  {
    throw InvalidArgument("level out of range");
  }
  return crt_[level];
}

const std::vector<std::uint64_t>& RnsContext::rescale_inverses(int level) const {
  if (level < 1 || level > max_level()) {
    throw InvalidArgument("no rescale available at this level");
  }
  return rescale_inv_[level];
}

std::shared_ptr<const RnsContext> RnsContext::get(const FheParams& params) {
  using Key = std::pair<std::uint32_t, std::vector<int>>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const RnsContext>> cache;

  Key key{params.ring_dim, params.modulus_chain_bits};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto ctx = std::make_shared<const RnsContext>(params.ring_dim,
                                                params.modulus_chain_bits);
  cache.emplace(std::move(key), ctx);
  return ctx;
}

}  // namespace blindfl::fhe::ckks
