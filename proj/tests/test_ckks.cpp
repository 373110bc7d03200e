// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numbers>

#include "ckks_fixtures.hpp"

using namespace chipfhe;
using fixture::cvec;
using fixture::kDelta;

namespace {

// m(omega^(5^j)) / scale with omega = exp(i pi / N), summed in long double.
cvec evaluate_slots(const std::vector<double>& m, double scale) {
  const std::size_t n = m.size();
  cvec out(n / 2);
  std::uint64_t g = 1;
  for (std::size_t j = 0; j < n / 2; ++j) {
    std::complex<long double> acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const long double a = std::numbers::pi_v<long double> * static_cast<long double>((g * k) % (2 * n)) / n;
      acc += static_cast<long double>(m[k]) * std::complex<long double>(std::cos(a), std::sin(a));
    }
    out[j] = {static_cast<double>(acc.real() / scale), static_cast<double>(acc.imag() / scale)};
    g = (g * 5) % (2 * n);
  }
  return out;
}

}  // namespace

TEST_CASE("encoding matches direct evaluation at the slot roots") {
  CkksContext ctx(make_basis(64, 2, 3, 40, 40));
  const cvec v = fixture::random_slots(32, 1);
  RnsPoly p = encode(ctx, v, kDelta, 2);
  const auto ref = evaluate_slots(lift_centered(ctx, p), kDelta);
  CHECK(fixture::max_error(ref, v) < 1e-9);
  CHECK(fixture::max_error(decode(ctx, p, kDelta), v) < 1e-9);
}

TEST_CASE("encode and decode at toy parameters") {
  const auto& ctx = fixture::toy();
  const cvec v = fixture::random_slots(ctx.n() / 2, 2);
  const cvec back = decode(ctx, encode(ctx, v, kDelta, ctx.l_max()), kDelta);
  CHECK(fixture::max_error(back, v) < std::ldexp(1.0, -20));

  RnsPoly z = encode(ctx, cvec(10, {0, 0}), kDelta, 3);
  for (const Poly& l : z.limbs)
    for (u64 c : l.coeffs) REQUIRE(c == 0);

  CHECK_THROWS_AS(encode(ctx, cvec(ctx.n() / 2 + 1), kDelta, 0), SlotOverflow);
}

TEST_CASE("encrypt then decrypt") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 11);
  const cvec v = fixture::random_slots(ctx.n() / 2, 3);
  Ciphertext c = encrypt(ctx, sk, encode(ctx, v, kDelta, ctx.l_max()), kDelta, 12);
  CHECK(c.level == ctx.l_max());
  CHECK(fixture::max_error(decode(ctx, decrypt(ctx, sk, c), c.scale), v) < std::ldexp(1.0, -20));
}

TEST_CASE("addition") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 21);
  const int l = 5;
  const cvec v = fixture::random_slots(ctx.n() / 2, 4);
  Ciphertext c = encrypt(ctx, sk, encode(ctx, v, kDelta, l), kDelta, 1);
  Ciphertext z = encrypt(ctx, sk, encode(ctx, {}, kDelta, l), kDelta, 2);
  Census census;
  Ciphertext s = add(ctx, c, z, &census);
  CHECK(fixture::max_error(decode(ctx, decrypt(ctx, sk, s), s.scale), v) < 1e-6);
  CHECK(census["add"].mas == 2 * (l + 1));

  Ciphertext d = add(ctx, c, c);
  cvec two(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) two[i] = 2.0 * v[i];
  CHECK(fixture::max_error(decode(ctx, decrypt(ctx, sk, d), d.scale), two) < 1e-6);
  for (int i = 0; i <= l; ++i)
    REQUIRE(d.c0.limbs[i] == mas(MasOp::add, c.c0.limbs[i], c.c0.limbs[i], nullptr, ctx.modulus(i)));

  Ciphertext lower = encrypt(ctx, sk, encode(ctx, v, kDelta, l - 1), kDelta, 3);
  CHECK_THROWS_AS(add(ctx, c, lower), LevelMismatch);
  Ciphertext scaled = c;
  scaled.scale *= 2;
  CHECK_THROWS_AS(add(ctx, c, scaled), ScaleMismatch);
}

TEST_CASE("multiplication before key switching") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 31);
  const int l = 4;
  const cvec a = fixture::random_slots(ctx.n() / 2, 5);
  const cvec b = fixture::random_slots(ctx.n() / 2, 6);
  Ciphertext ca = encrypt(ctx, sk, encode(ctx, a, kDelta, l), kDelta, 1);
  Ciphertext cb = encrypt(ctx, sk, encode(ctx, b, kDelta, l), kDelta, 2);
  ExtCiphertext ab = mult(ctx, ca, cb);
  ExtCiphertext ba = mult(ctx, cb, ca);
  CHECK(ab.d1 == ba.d1);
  CHECK(ab.scale == doctest::Approx(kDelta * kDelta));

  cvec prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  CHECK(fixture::max_error(decode(ctx, decrypt_ext(ctx, sk, ab), ab.scale), prod) < 1e-6);

  Ciphertext z = encrypt(ctx, sk, encode(ctx, {}, kDelta, l), kDelta, 3);
  const auto zero = decode(ctx, decrypt_ext(ctx, sk, mult(ctx, z, ca)), ab.scale);
  CHECK(fixture::max_error(zero, cvec(zero.size())) < 1e-6);

  Ciphertext lower = encrypt(ctx, sk, encode(ctx, b, kDelta, l - 1), kDelta, 4);
  CHECK_THROWS_AS(mult(ctx, ca, lower), LevelMismatch);
}

TEST_CASE("mult, relinearize, rescale with dnum = 3") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 41);
  CHECK(keys.relin.dnum == 3);
  CHECK(keys.relin.k == 3);
  for (int trial = 0; trial < 2; ++trial) {
    const int l = trial == 0 ? ctx.l_max() : 4;
    const cvec a = fixture::random_slots(ctx.n() / 2, 100 + trial);
    const cvec b = fixture::random_slots(ctx.n() / 2, 200 + trial);
    Ciphertext ca = encrypt(ctx, sk, encode(ctx, a, kDelta, l), kDelta, 1);
    Ciphertext cb = encrypt(ctx, sk, encode(ctx, b, kDelta, l), kDelta, 2);
    Ciphertext r = rescale(ctx, relinearize(ctx, mult(ctx, ca, cb), keys));
    CHECK(r.level == l - 1);
    cvec prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    CHECK(fixture::max_error(decode(ctx, decrypt(ctx, sk, r), r.scale), prod) < 1e-5);
  }
}

TEST_CASE("mult, relinearize, rescale with dnum = L+1") {
  const auto& ctx = fixture::full_dnum();
  auto [sk, keys] = keygen(ctx, 51);
  CHECK(keys.relin.k == 1);
  const cvec a = fixture::random_slots(ctx.n() / 2, 7);
  const cvec b = fixture::random_slots(ctx.n() / 2, 8);
  const int l = ctx.l_max();
  Ciphertext ca = encrypt(ctx, sk, encode(ctx, a, kDelta, l), kDelta, 1);
  Ciphertext cb = encrypt(ctx, sk, encode(ctx, b, kDelta, l), kDelta, 2);
  Ciphertext r = rescale(ctx, keyswitch_full_dnum(ctx, mult(ctx, ca, cb), keys.relin));
  cvec prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  CHECK(fixture::max_error(decode(ctx, decrypt(ctx, sk, r), r.scale), prod) < 1e-5);
}

TEST_CASE("rescale bookkeeping") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 61);
  const cvec v = fixture::random_slots(ctx.n() / 2, 9, 0.5);
  const int l = 3;
  const double q3 = static_cast<double>(ctx.modulus(l).q);
  // Multiply every limb by q_l to reach scale Delta * q_l without leaving 64-bit encoding.
  Ciphertext c = encrypt(ctx, sk, encode(ctx, v, kDelta, l), kDelta, 1);
  for (RnsPoly* p : {&c.c0, &c.c1})
    for (int i = 0; i <= l; ++i) {
      const PrimeModulus& m = ctx.modulus(i);
      const u64 f = ctx.modulus(l).q % m.q;
      for (auto& x : p->limbs[i].coeffs) x = mod_mul(x, f, m);
    }
  c.scale = kDelta * q3;
  Census census;
  Ciphertext r = rescale(ctx, c, &census);
  CHECK(r.level == l - 1);
  CHECK(r.scale == doctest::Approx(kDelta));
  CHECK(fixture::max_error(decode(ctx, decrypt(ctx, sk, r), r.scale), v) < 1e-6);
  CHECK(census["rescale"].intt == 2);
  CHECK(census["rescale"].ntt == 2 * l);

  Ciphertext twice_a = rescale(ctx, rescale(ctx, c));
  Ciphertext twice_b = rescale(ctx, rescale(ctx, c));
  CHECK(twice_a.c0 == twice_b.c0);
  CHECK(twice_a.c1 == twice_b.c1);
  CHECK(twice_a.level == l - 2);

  Ciphertext bottom = encrypt(ctx, sk, encode(ctx, v, kDelta, 0), kDelta, 2);
  CHECK_THROWS_AS(rescale(ctx, bottom), LevelExhausted);
}

TEST_CASE("rotation") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 71, {1, 5});
  const std::size_t slots = ctx.n() / 2;
  cvec v(slots);
  for (std::size_t i = 0; i < slots; ++i) v[i] = {static_cast<double>(i + 1) / slots, 0};
  const int l = 6;
  Ciphertext c = encrypt(ctx, sk, encode(ctx, v, kDelta, l), kDelta, 1);

  Ciphertext id = rotate_perm(ctx, c, 0);
  CHECK(id.c0 == c.c0);
  CHECK(id.c1 == c.c1);
  Ciphertext wrap = rotate_perm(ctx, c, static_cast<std::int64_t>(slots));
  CHECK(wrap.c0 == c.c0);

  for (std::int64_t rot : {1, 5}) {
    Ciphertext r = rotate(ctx, c, rot, keys);
    const auto out = decode(ctx, decrypt(ctx, sk, r), r.scale);
    cvec expect(slots);
    for (std::size_t i = 0; i < slots; ++i) expect[i] = v[(i + rot) % slots];
    CHECK(fixture::max_error(out, expect) < 1e-5);
  }

  Ciphertext two = rotate_perm(ctx, rotate_perm(ctx, c, 3), 4);
  Ciphertext once = rotate_perm(ctx, c, 7);
  CHECK(two.c0 == once.c0);
  CHECK(two.c1 == once.c1);

  CHECK_THROWS_AS(rotate(ctx, c, 2, keys), MissingRotationKey);
}

TEST_CASE("homomorphic expression matches plaintext arithmetic") {
  const auto& ctx = fixture::toy();
  auto [sk, keys] = keygen(ctx, 81, {3});
  const std::size_t slots = ctx.n() / 2;
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    const cvec a = fixture::random_slots(slots, 300 + trial);
    const cvec b = fixture::random_slots(slots, 400 + trial);
    const int l = ctx.l_max();
    Ciphertext ca = encrypt(ctx, sk, encode(ctx, a, kDelta, l), kDelta, trial);
    Ciphertext cb = encrypt(ctx, sk, encode(ctx, b, kDelta, l), kDelta, trial + 10);
    // rot3(a*b + a*a) after one rescale
    Ciphertext ab = relinearize(ctx, mult(ctx, ca, cb), keys);
    Ciphertext aa = relinearize(ctx, mult(ctx, ca, ca), keys);
    Ciphertext r = rotate(ctx, rescale(ctx, add(ctx, ab, aa)), 3, keys);
    cvec expect(slots);
    for (std::size_t i = 0; i < slots; ++i) {
      const std::size_t j = (i + 3) % slots;
      expect[i] = a[j] * b[j] + a[j] * a[j];
    }
    CHECK(fixture::max_error(decode(ctx, decrypt(ctx, sk, r), r.scale), expect) < 1e-5);
  }
}
