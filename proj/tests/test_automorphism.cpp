// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "chipfhe/polykernel.hpp"
#include "oracles.hpp"

using namespace chipfhe;

namespace {

Poly random_poly(std::size_t n, u64 q, std::mt19937_64& rng) {
  Poly p(n, 0);
  for (auto& c : p.coeffs) c = rng() % q;
  return p;
}

}  // namespace

TEST_CASE("oracle small examples") {
  PrimeModulus m = make_modulus(17, 16);
  Poly x(8, 0);
  x.coeffs[1] = 1;
  Poly r = automorphism_oracle(x, 3, m);
  CHECK(r.coeffs == std::vector<u64>{0, 0, 0, 1, 0, 0, 0, 0});
  Poly x3(8, 0);
  x3.coeffs[3] = 1;
  r = automorphism_oracle(x3, 3, m);
  CHECK(r.coeffs == std::vector<u64>{0, 16, 0, 0, 0, 0, 0, 0});
  std::mt19937_64 rng(1);
  Poly p = random_poly(8, 17, rng);
  CHECK(automorphism_oracle(p, 1, m) == p);
  CHECK_THROWS_AS(automorphism_oracle(p, 2, m), InvalidGalois);
  CHECK_THROWS_AS(automorphism_oracle(p, 17, m), InvalidGalois);
}

TEST_CASE("oracle agrees with evaluation at permuted roots") {
  const std::size_t n = 32;
  PrimeModulus m = find_ntt_prime(30, 2 * n);
  std::mt19937_64 rng(2);
  Poly p = random_poly(n, m.q, rng);
  for (u64 gle = 1; gle < 2 * n; gle += 2) {
    Poly r = automorphism_oracle(p, gle, m);
    auto lhs = oracle::evaluate_odd_powers(r.coeffs, m.psi, m.q);
    // p(psi^((2e+1) gle)) evaluated directly.
    for (std::size_t e = 0; e < n; ++e) {
      u64 x = oracle::powmod(m.psi, ((2 * e + 1) * gle) % (2 * n), m.q);
      u64 acc = 0, xp = 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc = (acc + oracle::mulmod(p.coeffs[i], xp, m.q)) % m.q;
        xp = oracle::mulmod(xp, x, m.q);
      }
      REQUIRE(lhs[e] == acc);
    }
  }
}

TEST_CASE("shuffle path matches oracle for every odd gle at N=2^8") {
  const std::size_t n = 256;
  PrimeModulus m = find_ntt_prime(40, 2 * n);
  std::mt19937_64 rng(3);
  Poly p = random_poly(n, m.q, rng);
  for (std::size_t n2 : {1u, 2u, 8u, 16u, 64u, 256u}) {
    NttPlan plan{n / n2, n2};
    for (u64 gle = 1; gle < 2 * n; gle += 2) {
      REQUIRE(automorphism_shuffle(p, gle, plan, m) == automorphism_oracle(p, gle, m));
    }
  }
}

TEST_CASE("identity gle passes every stage through") {
  const std::size_t n = 256;
  PrimeModulus m = find_ntt_prime(40, 2 * n);
  std::mt19937_64 rng(4);
  Poly p = random_poly(n, m.q, rng);
  ShuffleStats st;
  CHECK(automorphism_shuffle(p, 1, NttPlan{16, 16}, m, &st) == p);
  CHECK(st.rows == 16);
  CHECK(st.stages_per_row == 4);
}

TEST_CASE("shuffle path at N=2^10 for rotation gles") {
  const std::size_t n = 1024;
  PrimeModulus m = find_ntt_prime(40, 2 * n);
  std::mt19937_64 rng(5);
  Poly p = random_poly(n, m.q, rng);
  for (std::int64_t rot : {1, 7, static_cast<int>(n / 4)}) {
    u64 gle = galois_element(rot, n);
    REQUIRE(automorphism_shuffle(p, gle, NttPlan{16, 64}, m) == automorphism_oracle(p, gle, m));
  }
  CHECK(galois_element(0, n) == 1);
  CHECK(galois_element(1, n) == 5);
  CHECK(galois_element(static_cast<std::int64_t>(n / 2), n) == 1);
}

TEST_CASE("off-by-one address fault is detected") {
  const std::size_t n = 256;
  PrimeModulus m = find_ntt_prime(40, 2 * n);
  std::mt19937_64 rng(6);
  Poly p = random_poly(n, m.q, rng);
  CHECK(automorphism_shuffle(p, 5, NttPlan{16, 16}, m, nullptr, ShuffleFault::address_off_by_one) !=
        automorphism_oracle(p, 5, m));
}

TEST_CASE("composition law and signed-permutation property") {
  const std::size_t n = 128;
  PrimeModulus m = find_ntt_prime(30, 2 * n);
  std::mt19937_64 rng(7);
  Poly p = random_poly(n, m.q, rng);
  auto absval = [&](u64 v) { return std::min(v, m.q - v); };
  for (int trial = 0; trial < 200; ++trial) {
    u64 g1 = (rng() % n) * 2 + 1, g2 = (rng() % n) * 2 + 1;
    Poly lhs = automorphism_oracle(automorphism_oracle(p, g2, m), g1, m);
    Poly rhs = automorphism_oracle(p, (g1 * g2) % (2 * n), m);
    REQUIRE(lhs == rhs);
    Poly s = automorphism_shuffle(automorphism_shuffle(p, g2, NttPlan{8, 16}, m), g1, NttPlan{8, 16}, m);
    REQUIRE(s == rhs);
    std::vector<u64> a, b;
    for (u64 c : p.coeffs) a.push_back(absval(c));
    for (u64 c : lhs.coeffs) b.push_back(absval(c));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    REQUIRE(a == b);
  }
}

TEST_CASE("all lanes of a row land on a single address") {
  for (std::size_t n1 : {4u, 16u, 64u}) {
    const std::size_t n2 = 16, n = n1 * n2;
    for (u64 gle = 1; gle < 2 * n; gle += 2) {
      for (std::size_t l0 = 0; l0 < n1; ++l0) {
        const std::size_t l1 = shuffle_row_destination(l0, gle, n1);
        for (std::size_t j = 0; j < n2; ++j) {
          std::size_t i = j * n1 + l0;
          std::size_t t = (i * gle) % (2 * n);
          REQUIRE((t % n) % n1 == l1);
        }
      }
    }
  }
}
