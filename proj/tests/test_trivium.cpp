// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "chipfhe/trivium.hpp"
#include "oracles.hpp"

using namespace chipfhe;

TEST_CASE("word-parallel stream equals bit-serial reference") {
  for (u64 seed : {u64{0}, u64{1}, u64{0xdeadbeefcafef00dULL}, ~u64{0}}) {
    oracle::TriviumBitSerial ref(seed);
    Trivium t(seed);
    for (int i = 0; i < 500; ++i) REQUIRE(t.next() == ref.next_word());
  }
}

TEST_CASE("stream is deterministic and seed-sensitive") {
  CHECK(trivium_stream(42, 64) == trivium_stream(42, 64));
  CHECK(trivium_stream(42, 1)[0] != trivium_stream(43, 1)[0]);
  CHECK(trivium_stream(7, 0).empty());
}

TEST_CASE("uniform expansion stays below q and is reproducible") {
  PrimeModulus m = find_ntt_prime(40, 1 << 13);
  std::vector<u64> a(4096), b(4096);
  expand_uniform(99, m, a.data(), a.size());
  expand_uniform(99, m, b.data(), b.size());
  CHECK(a == b);
  double mean = 0;
  for (u64 v : a) {
    REQUIRE(v < m.q);
    mean += static_cast<double>(v) / static_cast<double>(m.q);
  }
  mean /= static_cast<double>(a.size());
  CHECK(mean == doctest::Approx(0.5).epsilon(0.03));
}
