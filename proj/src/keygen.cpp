// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include "chipfhe/trivium.hpp"
#include "ckks_internal.hpp"

namespace chipfhe {

SecretKey gen_secret(const CkksContext& ctx, u64 seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> tern(-1, 1);
  SecretKey sk;
  sk.coeffs.resize(ctx.n());
  for (auto& c : sk.coeffs) c = tern(rng);
  sk.ntt = rns_from_signed(ctx, sk.coeffs, ctx.l_max(), true);
  to_ntt(ctx, sk.ntt);
  return sk;
}

Poly ksk1_limb(const CkksContext& ctx, const KskDigit& digit, std::size_t key_limb) {
  if (!digit.ksk1.limbs.empty()) return digit.ksk1.limbs[key_limb];
  const std::uint32_t id = digit.ksk0.limbs[key_limb].modulus_id;
  Poly p(ctx.n(), id, Domain::ntt);
  expand_uniform(digit.ksk1_seeds[key_limb], ctx.modulus(id), p.coeffs.data(), p.size());
  return p;
}

void expand_key(const CkksContext& ctx, KeySwitchKey& key) {
  for (auto& d : key.digits) {
    if (!d.ksk1.limbs.empty()) continue;
    RnsPoly a;
    a.level = d.ksk0.level;
    for (std::size_t u = 0; u < d.ksk0.limbs.size(); ++u) a.limbs.push_back(ksk1_limb(ctx, d, u));
    d.ksk1 = std::move(a);
  }
}

void drop_expansion(KeySwitchKey& key) {
  for (auto& d : key.digits) d.ksk1 = RnsPoly{};
}

u64 key_bytes(const KeySwitchKey& key) {
  u64 bytes = 0;
  for (const auto& d : key.digits) {
    u64 limb_bytes = 0;
    for (const auto& l : d.ksk0.limbs) limb_bytes += 8 * l.size();
    bytes += limb_bytes;
    bytes += key.expanded() ? limb_bytes : 8 * d.ksk1_seeds.size();
  }
  return bytes;
}

KeySwitchKey gen_switch_key(const CkksContext& ctx, const SecretKey& sk, const RnsPoly& s_prime, u64 seed,
                            bool seeded) {
  const RnsBasis& b = ctx.basis();
  std::mt19937_64 rng(seed);
  KeySwitchKey key;
  key.k = static_cast<int>(ctx.p_count());
  key.l_max = b.l_max;
  key.dnum = (b.l_max + 1 + key.k - 1) / key.k;
  const std::size_t limbs = sk.ntt.limbs.size();
  for (int beta = 0; beta < key.dnum; ++beta) {
    KskDigit d;
    for (std::size_t u = 0; u < limbs; ++u) d.ksk1_seeds.push_back(rng());
    RnsPoly e = rns_from_signed(ctx, detail::sample_gaussian(rng, ctx.n(), ctx.sigma()), b.l_max, true);
    to_ntt(ctx, e);
    d.ksk0 = RnsPoly(ctx, b.l_max, true, Domain::ntt);
    const std::size_t lo = static_cast<std::size_t>(beta * key.k);
    const std::size_t hi = std::min<std::size_t>(lo + key.k, b.l_max + 1);
    std::vector<Poly> expanded;
    for (std::size_t u = 0; u < limbs; ++u) {
      const Poly a = ksk1_limb(ctx, d, u);
      const PrimeModulus& m = ctx.modulus(a.modulus_id);
      const bool gadget = u >= lo && u < hi;
      const u64 pm = gadget ? ctx.p_mod_q(u) : 0;
      auto& out = d.ksk0.limbs[u].coeffs;
      for (std::size_t x = 0; x < ctx.n(); ++x) {
        u64 v = mod_sub(e.limbs[u].coeffs[x], mod_mul(a.coeffs[x], sk.ntt.limbs[u].coeffs[x], m), m);
        if (gadget) v = mod_add(v, mod_mul(pm, s_prime.limbs[u].coeffs[x], m), m);
        out[x] = v;
      }
      if (!seeded) expanded.push_back(a);
    }
    if (!seeded) {
      d.ksk1.level = b.l_max;
      d.ksk1.limbs = std::move(expanded);
    }
    key.digits.push_back(std::move(d));
  }
  return key;
}

namespace {

std::vector<std::int64_t> apply_galois(const std::vector<std::int64_t>& s, u64 gle) {
  const std::size_t n = s.size();
  std::vector<std::int64_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const u64 t = (static_cast<u64>(i) * gle) % (2 * n);
    if (t < n) out[t] = s[i];
    else out[t - n] = -s[i];
  }
  return out;
}

}  // namespace

std::pair<SecretKey, KeySet> keygen(const CkksContext& ctx, u64 seed, const std::vector<std::int64_t>& rotations,
                                    bool seeded) {
  std::mt19937_64 master(seed);
  SecretKey sk = gen_secret(ctx, master());
  RnsPoly s2 = sk.ntt;
  for (std::size_t u = 0; u < s2.limbs.size(); ++u) {
    const PrimeModulus& m = ctx.modulus(s2.limbs[u].modulus_id);
    for (auto& c : s2.limbs[u].coeffs) c = mod_mul(c, c, m);
  }
  KeySet keys;
  keys.relin = gen_switch_key(ctx, sk, s2, master(), seeded);
  for (std::int64_t rot : rotations) {
    RnsPoly sr = rns_from_signed(ctx, apply_galois(sk.coeffs, galois_element(rot, ctx.n())), ctx.l_max(), true);
    to_ntt(ctx, sr);
    keys.rotation[rot] = gen_switch_key(ctx, sk, sr, master(), seeded);
  }
  return {std::move(sk), std::move(keys)};
}

}  // namespace chipfhe
