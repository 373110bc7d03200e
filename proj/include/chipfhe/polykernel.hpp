// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "chipfhe/modarith.hpp"

namespace chipfhe {

enum class Domain : std::uint8_t { coeff = 0, ntt = 1 };

struct Poly {
  std::vector<u64> coeffs;
  std::uint32_t modulus_id = 0;
  Domain domain = Domain::coeff;

  Poly() = default;
  Poly(std::size_t n, std::uint32_t id, Domain d = Domain::coeff) : coeffs(n, 0), modulus_id(id), domain(d) {}
  std::size_t size() const { return coeffs.size(); }
  bool operator==(const Poly&) const = default;
};

/// (N1, N2) split of the ring degree. Coefficient i sits in memory i / N1
/// at address i % N1.
struct NttPlan {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  TwiddleMode twiddle_mode = TwiddleMode::stored;
};

// In-place kernels on raw arrays. Input natural order, output bit-reversed.
void ntt_inplace(u64* a, const TwiddleTable& t);
void intt_inplace(u64* a, const TwiddleTable& t);

Poly ntt_reference(const Poly& p, const TwiddleTable& t);
Poly intt_reference(const Poly& p, const TwiddleTable& t);

/// Four-step transform over the N1 x N2 layout, written back in place with
/// the same output order as ntt_reference.
Poly ntt_hybrid(const Poly& p, const TwiddleTable& t, const NttPlan& plan);

Poly automorphism_oracle(const Poly& p, u64 gle, const PrimeModulus& m);

/// Deliberate faults for the mutation harness; `none` in normal use.
enum class ShuffleFault { none, address_off_by_one };

struct ShuffleStats {
  std::size_t rows = 0;
  std::size_t stages_per_row = 0;
};

/// Row-wise automorphism: every row of N2 lanes moves to one destination
/// address and is permuted through log2(N2) pairwise exchange stages.
Poly automorphism_shuffle(const Poly& p, u64 gle, const NttPlan& plan, const PrimeModulus& m,
                          ShuffleStats* stats = nullptr, ShuffleFault fault = ShuffleFault::none);

/// Destination address shared by all lanes of row l0.
std::size_t shuffle_row_destination(std::size_t l0, u64 gle, std::size_t n1);

/// gle = 5^rot mod 2N.
u64 galois_element(std::int64_t rot, u64 n);

enum class MasOp { add, sub, mul, mac };

Poly mas(MasOp op, const Poly& a, const Poly& b, const Poly* acc, const PrimeModulus& m);

/// Binary format: u64 N, u32 modulus_id, u8 domain, then N little-endian u64.
void write_poly(std::ostream& os, const Poly& p);
Poly read_poly(std::istream& is);

}  // namespace chipfhe
