// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "chipfhe/modarith.hpp"

namespace chipfhe {

/// Trivium keystream, 64 steps per call. The 64-bit seed fills the first
/// 64 key bits and the first 64 IV bits; warm-up is 18 rounds of 64 steps.
class Trivium {
 public:
  static constexpr int kInitRounds = 18;

  explicit Trivium(u64 seed);
  u64 next();

 private:
  u128 a_ = 0;  // s1..s93, s_i at bit 93-i
  u128 b_ = 0;  // s94..s177
  u128 c_ = 0;  // s178..s288
};

std::vector<u64> trivium_stream(u64 seed, std::size_t count);

/// Uniform residues mod m from the keystream: each word is masked to the
/// bit length of q and rejected when >= q.
void expand_uniform(u64 seed, const PrimeModulus& m, u64* out, std::size_t count);

}  // namespace chipfhe
