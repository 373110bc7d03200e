// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "ckks_internal.hpp"

namespace chipfhe {

namespace {

void check_pair(const Ciphertext& a, const Ciphertext& b) {
  if (a.level != b.level || a.c0.level != a.c1.level || b.c0.level != b.c1.level)
    throw LevelMismatch("levels " + std::to_string(a.level) + " and " + std::to_string(b.level));
  for (const RnsPoly* p : {&a.c0, &a.c1, &b.c0, &b.c1})
    if (p->domain() != Domain::ntt) throw DomainMismatch("ciphertexts must be in NTT domain");
}

// out[i] = a[i] * b[i] (+ c[i] * d[i]) on limbs 0..level.
RnsPoly limb_product(const CkksContext& ctx, const RnsPoly& a, const RnsPoly& b, const RnsPoly* c = nullptr,
                     const RnsPoly* d = nullptr) {
  RnsPoly out(ctx, a.level, false, Domain::ntt);
  const auto nl = static_cast<std::int64_t>(a.level + 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nl; ++i) {
    const PrimeModulus& m = ctx.modulus(static_cast<std::size_t>(i));
    Poly r = mas(MasOp::mul, a.limbs[i], b.limbs[i], nullptr, m);
    if (c) r = mas(MasOp::mac, c->limbs[i], d->limbs[i], &r, m);
    out.limbs[i] = std::move(r);
  }
  return out;
}

}  // namespace

Ciphertext add(const CkksContext& ctx, const Ciphertext& a, const Ciphertext& b, Census* census) {
  check_pair(a, b);
  if (std::abs(a.scale - b.scale) > 1e-9 * std::abs(a.scale)) throw ScaleMismatch("scales differ");
  Ciphertext out = a;
  const auto nl = static_cast<std::int64_t>(a.level + 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nl; ++i) {
    const PrimeModulus& m = ctx.modulus(static_cast<std::size_t>(i));
    out.c0.limbs[i] = mas(MasOp::add, a.c0.limbs[i], b.c0.limbs[i], nullptr, m);
    out.c1.limbs[i] = mas(MasOp::add, a.c1.limbs[i], b.c1.limbs[i], nullptr, m);
  }
  if (census) (*census)["add"].mas += 2 * static_cast<u64>(a.level + 1);
  return out;
}

ExtCiphertext mult(const CkksContext& ctx, const Ciphertext& a, const Ciphertext& b, Census* census) {
  check_pair(a, b);
  ExtCiphertext d;
  d.level = a.level;
  d.scale = a.scale * b.scale;
  d.d0 = limb_product(ctx, a.c0, b.c0);
  d.d1 = limb_product(ctx, a.c0, b.c1, &a.c1, &b.c0);
  d.d2 = limb_product(ctx, a.c1, b.c1);
  if (census) (*census)["mult"].mas += 4 * static_cast<u64>(a.level + 1);
  return d;
}

Ciphertext rotate_perm(const CkksContext& ctx, const Ciphertext& c, std::int64_t rot, Census* census) {
  const u64 gle = galois_element(rot, ctx.n());
  Ciphertext out = c;
  for (RnsPoly* p : {&out.c0, &out.c1}) {
    to_coeff(ctx, *p);
    const auto nl = static_cast<std::int64_t>(p->limbs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < nl; ++i) {
      Poly& limb = p->limbs[i];
      limb = automorphism_shuffle(limb, gle, ctx.shuffle_plan(), ctx.modulus(limb.modulus_id));
    }
    to_ntt(ctx, *p);
  }
  if (census) {
    auto& r = (*census)["rotate"];
    const u64 n = 2 * static_cast<u64>(c.level + 1);
    r.intt += n;
    r.aut += n;
    r.ntt += n;
  }
  return out;
}

Ciphertext encrypt(const CkksContext& ctx, const SecretKey& sk, const RnsPoly& plain, double scale, u64 seed) {
  if (plain.domain() != Domain::ntt) throw DomainMismatch("plaintext must be in NTT domain");
  std::mt19937_64 rng(seed);
  const int l = plain.level;
  Ciphertext c;
  c.level = l;
  c.scale = scale;
  c.c1 = RnsPoly(ctx, l, false, Domain::ntt);
  for (Poly& limb : c.c1.limbs) detail::sample_uniform(rng, limb, ctx.modulus(limb.modulus_id));
  RnsPoly e = rns_from_signed(ctx, detail::sample_gaussian(rng, ctx.n(), ctx.sigma()), l, false);
  to_ntt(ctx, e);
  c.c0 = RnsPoly(ctx, l, false, Domain::ntt);
  for (int i = 0; i <= l; ++i) {
    const PrimeModulus& m = ctx.modulus(static_cast<std::size_t>(i));
    for (std::size_t x = 0; x < ctx.n(); ++x) {
      const u64 as = mod_mul(c.c1.limbs[i].coeffs[x], sk.ntt.limbs[i].coeffs[x], m);
      c.c0.limbs[i].coeffs[x] = mod_sub(mod_add(plain.limbs[i].coeffs[x], e.limbs[i].coeffs[x], m), as, m);
    }
  }
  return c;
}

RnsPoly decrypt(const CkksContext& ctx, const SecretKey& sk, const Ciphertext& c) {
  RnsPoly out(ctx, c.level, false, Domain::ntt);
  for (int i = 0; i <= c.level; ++i) {
    const PrimeModulus& m = ctx.modulus(static_cast<std::size_t>(i));
    out.limbs[i] = mas(MasOp::mac, c.c1.limbs[i], sk.ntt.limbs[i], &c.c0.limbs[i], m);
  }
  return out;
}

RnsPoly decrypt_ext(const CkksContext& ctx, const SecretKey& sk, const ExtCiphertext& d) {
  RnsPoly out(ctx, d.level, false, Domain::ntt);
  for (int i = 0; i <= d.level; ++i) {
    const PrimeModulus& m = ctx.modulus(static_cast<std::size_t>(i));
    const Poly& s = sk.ntt.limbs[i];
    Poly s2 = mas(MasOp::mul, s, s, nullptr, m);
    Poly r = mas(MasOp::mac, d.d1.limbs[i], s, &d.d0.limbs[i], m);
    out.limbs[i] = mas(MasOp::mac, d.d2.limbs[i], s2, &r, m);
  }
  return out;
}

}  // namespace chipfhe
