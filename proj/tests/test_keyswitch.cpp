// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "chipfhe/analytic.hpp"
#include "ckks_fixtures.hpp"
#include "oracles.hpp"

using namespace chipfhe;
using fixture::cvec;
using fixture::kDelta;

namespace {

ExtCiphertext random_ext(const CkksContext& ctx, int level, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ExtCiphertext d;
  d.level = level;
  d.scale = kDelta;
  for (RnsPoly* p : {&d.d0, &d.d1, &d.d2}) {
    *p = RnsPoly(ctx, level, false, Domain::ntt);
    for (Poly& l : p->limbs)
      for (auto& c : l.coeffs) c = rng() % ctx.modulus(l.modulus_id).q;
  }
  return d;
}

std::vector<u64> moduli_of(const CkksContext& ctx, const RnsPoly& p) {
  std::vector<u64> m;
  for (const Poly& l : p.limbs) m.push_back(ctx.modulus(l.modulus_id).q);
  return m;
}

mpz_class big_p(const CkksContext& ctx) {
  mpz_class p = 1;
  for (std::size_t k = 0; k < ctx.p_count(); ++k) p *= oracle::from_u64(ctx.modulus(ctx.basis().p_id(k)).q);
  return p;
}

}  // namespace

TEST_CASE("full-dnum census at several depths") {
  const auto& ctx = fixture::full_dnum();
  auto [sk, keys] = keygen(ctx, 1);
  for (int l : {0, 2, ctx.l_max()}) {
    Census c;
    keyswitch_full_dnum(ctx, random_ext(ctx, l, 7), keys.relin, &c);
    const u64 n = l + 1;
    CHECK(c["modup"].intt == n);
    CHECK(c["modup"].ntt == n * (n + 1));
    CHECK(c["keymul"].mas == 2 * n * (n + 1));
    CHECK(c["moddown"].intt == 2);
    CHECK(c["moddown"].ntt == 2 * n);
    CHECK(c["moddown"].bconv == 0);
  }
}

TEST_CASE("generic keyswitch with dnum = L+1 is bit-identical to the full-dnum path") {
  const auto& ctx = fixture::full_dnum();
  auto [sk, keys] = keygen(ctx, 2);
  for (int l : {0, 3, ctx.l_max()}) {
    const ExtCiphertext d = random_ext(ctx, l, 100 + l);
    Ciphertext a = keyswitch_full_dnum(ctx, d, keys.relin);
    Ciphertext b = keyswitch_generic(ctx, d, keys.relin, ctx.l_max() + 1);
    CHECK(a.c0 == b.c0);
    CHECK(a.c1 == b.c1);
  }
}

TEST_CASE("identity key preserves the plaintext") {
  for (const CkksContext* ctx : {&fixture::full_dnum(), &fixture::toy()}) {
    SecretKey sk = gen_secret(*ctx, 3);
    KeySwitchKey id = gen_switch_key(*ctx, sk, sk.ntt, 4);
    const cvec v = fixture::random_slots(ctx->n() / 2, 5);
    const int l = ctx->l_max() - 1;
    Ciphertext c = encrypt(*ctx, sk, encode(*ctx, v, kDelta, l), kDelta, 6);
    ExtCiphertext d{c.c0, RnsPoly(*ctx, l, false, Domain::ntt), c.c1, l, c.scale};
    Ciphertext r = id.k == 1 ? keyswitch_full_dnum(*ctx, d, id) : keyswitch_generic(*ctx, d, id, id.dnum);
    CHECK(fixture::max_error(decode(*ctx, decrypt(*ctx, sk, r), r.scale), v) < 1e-5);
  }
}

TEST_CASE("generic census per digit") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 8);
  const u64 k = 3;
  for (int l : {8, 7, 4, 2}) {
    Census c;
    keyswitch_generic(ctx, random_ext(ctx, l, 9), keys.relin, 3, &c);
    u64 ntt = 0, bconv = 0, digits = 0;
    for (u64 lo = 0; lo <= static_cast<u64>(l); lo += k, ++digits) {
      const u64 kb = std::min<u64>(k, l + 1 - lo);
      const u64 targets = l + 1 + k - kb;
      ntt += targets;
      if (kb > 1) bconv += kb * (1 + targets);
    }
    CHECK(c["modup"].intt == static_cast<u64>(l + 1));
    CHECK(c["modup"].ntt == ntt);
    CHECK(c["modup"].bconv == bconv);
    CHECK(c["keymul"].mas == 2 * digits * (l + 1 + k));
    CHECK(c["moddown"].intt == 2 * k);
    CHECK(c["moddown"].ntt == 2 * static_cast<u64>(l + 1));
    CHECK(c["moddown"].bconv == 2 * k * (l + 2));
  }
}

TEST_CASE("dnum = 3, K = 8, L = 23 shape") {
  CkksContext ctx(make_basis(256, 23, 3, 40, 40));
  CHECK(ctx.p_count() == 8);
  auto [sk, keys] = keygen(ctx, 10);
  CHECK(keys.relin.dnum == 3);
  CHECK(keys.relin.digits.size() == 3);
  const cvec v = fixture::random_slots(128, 11);
  Ciphertext c = encrypt(ctx, sk, encode(ctx, v, kDelta, 23), kDelta, 12);
  ExtCiphertext d{c.c0, RnsPoly(ctx, 23, false, Domain::ntt), c.c1, 23, c.scale};
  KeySwitchKey id = gen_switch_key(ctx, sk, sk.ntt, 13);
  Ciphertext r = keyswitch_generic(ctx, d, id, 3);
  CHECK(fixture::max_error(decode(ctx, decrypt(ctx, sk, r), r.scale), v) < 1e-5);
  CHECK_THROWS_AS(keyswitch_generic(ctx, d, id, 4), ConfigError);
  CHECK_THROWS_AS(keyswitch_full_dnum(ctx, d, id), ConfigError);
}

TEST_CASE("switch keys satisfy the generation identity") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 14);
  const KeySwitchKey& key = keys.relin;
  const int big_l = ctx.l_max();
  const double bound = 6 * ctx.sigma();
  for (int beta = 0; beta < key.dnum; ++beta) {
    const KskDigit& d = key.digits[beta];
    for (std::size_t u = 0; u < d.ksk0.limbs.size(); ++u) {
      const PrimeModulus& m = ctx.modulus(u);
      const Poly a = ksk1_limb(ctx, d, u);
      Poly v(ctx.n(), static_cast<std::uint32_t>(u), Domain::ntt);
      const bool gadget = static_cast<int>(u) <= big_l && static_cast<int>(u) / key.k == beta;
      for (std::size_t x = 0; x < ctx.n(); ++x) {
        const u64 s = sk.ntt.limbs[u].coeffs[x];
        u64 t = mod_add(d.ksk0.limbs[u].coeffs[x], mod_mul(a.coeffs[x], s, m), m);
        if (gadget) t = mod_sub(t, mod_mul(ctx.p_mod_q(u), mod_mul(s, s, m), m), m);
        v.coeffs[x] = t;
      }
      intt_inplace(v.coeffs.data(), ctx.table(u));
      for (u64 c : v.coeffs) {
        const double centered = c > m.q / 2 ? -static_cast<double>(m.q - c) : static_cast<double>(c);
        REQUIRE(std::abs(centered) <= bound);
      }
    }
  }
}

TEST_CASE("seeded and expanded keys give identical ciphertexts") {
  const auto& ctx = fixture::toy();
  auto [sk, seeded] = keygen(ctx, 15, {}, true);
  auto [sk2, expanded] = keygen(ctx, 15, {}, false);
  CHECK(sk.coeffs == sk2.coeffs);
  CHECK_FALSE(seeded.relin.expanded());
  CHECK(expanded.relin.expanded());

  KeySwitchKey re = seeded.relin;
  expand_key(ctx, re);
  for (int b = 0; b < re.dnum; ++b) CHECK(re.digits[b].ksk1 == expanded.relin.digits[b].ksk1);

  const ExtCiphertext d = random_ext(ctx, 6, 16);
  Ciphertext a = keyswitch_generic(ctx, d, seeded.relin, 3);
  Ciphertext b = keyswitch_generic(ctx, d, expanded.relin, 3);
  CHECK(a.c0 == b.c0);
  CHECK(a.c1 == b.c1);

  // Discard one limb of the expansion and regenerate it from its seed.
  KeySwitchKey partial = expanded.relin;
  partial.digits[1].ksk1.limbs[4] = ksk1_limb(ctx, seeded.relin.digits[1], 4);
  Ciphertext c = keyswitch_generic(ctx, d, partial, 3);
  CHECK(c.c0 == a.c0);

  const double ratio = static_cast<double>(key_bytes(seeded.relin)) / static_cast<double>(key_bytes(expanded.relin));
  CHECK(ratio == doctest::Approx(0.5 + 0.5 / static_cast<double>(ctx.n())));
  CHECK(key_bytes(seeded.relin) == 3 * ctx.basis().total_moduli() * (ctx.n() * 8 + 8));
  drop_expansion(re);
  CHECK_FALSE(re.expanded());
}

TEST_CASE("key coverage errors") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 17);
  const ExtCiphertext d = random_ext(ctx, 3, 18);
  CHECK_THROWS_AS(keyswitch_generic(ctx, d, keys.relin, 2), ConfigError);
  KeySwitchKey bad = keys.relin;
  bad.digits.clear();
  CHECK_THROWS_AS(keyswitch_generic(ctx, d, bad, 3), KeyLevelTooLow);
}

TEST_CASE("base conversion") {
  const auto& ctx = fixture::toy();
  const std::uint32_t p0 = static_cast<std::uint32_t>(ctx.basis().p_id(0));
  std::vector<std::uint32_t> qs;
  for (std::uint32_t i = 0; i <= 8; ++i) qs.push_back(i);
  std::mt19937_64 rng(19);

  SUBCASE("single small source converts exactly") {
    RnsPoly y;
    y.limbs.emplace_back(ctx.n(), p0, Domain::coeff);
    for (auto& c : y.limbs[0].coeffs) c = rng() % 1000000;
    const RnsPoly plain = y;
    to_ntt(ctx, y);
    RnsPoly out = bconv_routine(ctx, y, qs);
    to_coeff(ctx, out);
    for (std::size_t t = 0; t < qs.size(); ++t) REQUIRE(out.limbs[t].coeffs == plain.limbs[0].coeffs);
  }

  SUBCASE("zero maps to zero") {
    RnsPoly y;
    for (std::size_t k = 0; k < 3; ++k)
      y.limbs.emplace_back(ctx.n(), static_cast<std::uint32_t>(ctx.basis().p_id(k)), Domain::ntt);
    RnsPoly out = bconv_routine(ctx, y, qs);
    for (const Poly& l : out.limbs)
      for (u64 c : l.coeffs) REQUIRE(c == 0);
  }

  SUBCASE("result differs from the exact value by a small multiple of P") {
    RnsPoly y;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto id = static_cast<std::uint32_t>(ctx.basis().p_id(k));
      y.limbs.emplace_back(ctx.n(), id, Domain::coeff);
      for (auto& c : y.limbs.back().coeffs) c = rng() % ctx.modulus(id).q;
    }
    const RnsPoly plain = y;
    to_ntt(ctx, y);
    Census census;
    RnsPoly out = bconv_routine(ctx, y, qs, &census);
    CHECK(census["bconv"].bconv == 3 * (1 + qs.size()));
    to_coeff(ctx, out);
    const mpz_class p = big_p(ctx);
    const auto pm = moduli_of(ctx, plain);
    for (std::size_t x = 0; x < ctx.n(); x += 17) {
      std::vector<u64> res;
      for (const Poly& l : plain.limbs) res.push_back(l.coeffs[x]);
      mpz_class v = oracle::crt_centered(res, pm);
      if (v < 0) v += p;
      int multiple = -1;
      for (int u = 0; u < 3 && multiple < 0; ++u)
        if (oracle::mod_of(v + u * p, ctx.modulus(0).q) == out.limbs[0].coeffs[x]) multiple = u;
      REQUIRE(multiple >= 0);
      for (std::size_t t = 1; t < qs.size(); ++t)
        REQUIRE(oracle::mod_of(v + multiple * p, ctx.modulus(t).q) == out.limbs[t].coeffs[x]);
    }
  }
}

TEST_CASE("moddown") {
  const auto& ctx = fixture::toy();
  const int l = 5;
  std::mt19937_64 rng(20);
  const mpz_class p = big_p(ctx);

  SUBCASE("exact quotient for multiples of P") {
    std::vector<std::int64_t> y(ctx.n());
    for (auto& c : y) c = static_cast<std::int64_t>(rng() % 2000001) - 1000000;
    RnsPoly d = rns_from_signed(ctx, y, l, true);
    for (Poly& limb : d.limbs) {
      const PrimeModulus& m = ctx.modulus(limb.modulus_id);
      const u64 pm = oracle::mod_of(p, m.q);
      for (auto& c : limb.coeffs) c = mod_mul(c, pm, m);
    }
    to_ntt(ctx, d);
    Census census;
    RnsPoly out = moddown(ctx, d, &census);
    CHECK(out == [&] {
      RnsPoly e = rns_from_signed(ctx, y, l, false);
      to_ntt(ctx, e);
      return e;
    }());
    CHECK(census["moddown"].intt == 3);
    CHECK(census["moddown"].ntt == static_cast<u64>(l + 1));
  }

  SUBCASE("random input within K of the exact floor quotient") {
    RnsPoly d(ctx, l, true, Domain::coeff);
    for (Poly& limb : d.limbs)
      for (auto& c : limb.coeffs) c = rng() % ctx.modulus(limb.modulus_id).q;
    const RnsPoly plain = d;
    to_ntt(ctx, d);
    RnsPoly out = moddown(ctx, d);
    to_coeff(ctx, out);
    const auto all = moduli_of(ctx, plain);
    std::vector<u64> qm(all.begin(), all.begin() + l + 1);
    mpz_class qbig = 1;
    for (u64 q : qm) qbig *= oracle::from_u64(q);
    for (std::size_t x = 0; x < ctx.n(); x += 13) {
      std::vector<u64> res;
      for (const Poly& limb : plain.limbs) res.push_back(limb.coeffs[x]);
      mpz_class v = oracle::crt_centered(res, all);
      mpz_class rem = v % p;
      if (rem < 0) rem += p;
      const mpz_class exact = (v - rem) / p;
      std::vector<u64> got;
      for (const Poly& limb : out.limbs) got.push_back(limb.coeffs[x]);
      mpz_class diff = (oracle::crt_centered(got, qm) - exact) % qbig;
      if (diff > qbig / 2) diff -= qbig;
      if (diff < -qbig / 2) diff += qbig;
      REQUIRE(abs(diff) <= 3);
    }
  }
}

TEST_CASE("measured census equals the analytic closed forms") {
  auto same = [](const OpCounts& got, const analytic::PhaseCounts& want) {
    return got.intt == want.intt && got.ntt == want.ntt && got.mas == want.mas && got.bconv == want.bconv;
  };
  const auto& full = fixture::full_dnum();
  auto [sk1, k1] = keygen(full, 21);
  for (int l = 0; l <= full.l_max(); ++l) {
    Census a, b;
    keyswitch_full_dnum(full, random_ext(full, l, 22), k1.relin, &a);
    keyswitch_generic(full, random_ext(full, l, 22), k1.relin, full.l_max() + 1, &b);
    const auto fa = analytic::keyswitch_census_full(l);
    const auto fb = analytic::keyswitch_census_generic(l, 1);
    CHECK(same(a["modup"], fa.modup));
    CHECK(same(a["keymul"], fa.keymul));
    CHECK(same(a["moddown"], fa.moddown));
    CHECK(same(b["modup"], fb.modup));
    CHECK(same(b["keymul"], fb.keymul));
    CHECK(same(b["moddown"], fb.moddown));
  }
  const auto& toy = fixture::toy();
  auto [sk2, k2] = keygen(toy, 23);
  for (int l : {0, 1, 3, 5, 8}) {
    Census c;
    keyswitch_generic(toy, random_ext(toy, l, 24), k2.relin, 3, &c);
    const auto g = analytic::keyswitch_census_generic(l, 3);
    CHECK(same(c["modup"], g.modup));
    CHECK(same(c["keymul"], g.keymul));
    CHECK(same(c["moddown"], g.moddown));
  }
}
