// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <string>
#include <utility>

#include "chipfhe/polykernel.hpp"

namespace chipfhe {

namespace {

void check_galois(u64 gle, u64 n) {
  if ((gle & 1) == 0 || gle == 0 || gle >= 2 * n) {
    throw InvalidGalois("gle=" + std::to_string(gle) + " must be odd and in (0, 2N)");
  }
}

}  // namespace

u64 galois_element(std::int64_t rot, u64 n) {
  const u64 two_n = 2 * n;
  const std::int64_t order = static_cast<std::int64_t>(n / 2);
  std::int64_t r = ((rot % order) + order) % order;
  return powmod64(5, static_cast<u64>(r), two_n);
}

Poly automorphism_oracle(const Poly& p, u64 gle, const PrimeModulus& m) {
  const u64 n = p.size();
  check_galois(gle, n);
  if (p.domain != Domain::coeff) throw DomainError("automorphism expects coefficient domain");
  Poly out(n, p.modulus_id, Domain::coeff);
  const u64 two_n = 2 * n;
  for (u64 i = 0; i < n; ++i) {
    u64 t = static_cast<u64>((static_cast<u128>(i) * gle) % two_n);
    u64 v = p.coeffs[i];
    out.coeffs[t % n] = t >= n ? mod_neg(v, m) : v;
  }
  return out;
}

std::size_t shuffle_row_destination(std::size_t l0, u64 gle, std::size_t n1) {
  return static_cast<std::size_t>((static_cast<u128>(l0) * gle) % n1);
}

Poly automorphism_shuffle(const Poly& p, u64 gle, const NttPlan& plan, const PrimeModulus& m,
                          ShuffleStats* stats, ShuffleFault fault) {
  const std::size_t n = p.size();
  check_galois(gle, n);
  if (p.domain != Domain::coeff) throw DomainError("automorphism expects coefficient domain");
  const std::size_t n1 = plan.n1, n2 = plan.n2;
  if (n1 * n2 != n || (n1 & (n1 - 1)) || (n2 & (n2 - 1))) throw PlanMismatch("plan does not factor N");
  const int stages = log2_exact(n2);
  const u64 two_n2 = 2 * n2;

  Poly out(n, p.modulus_id, Domain::coeff);
  std::vector<u64> val(n2), dst(n2);
  std::vector<std::uint8_t> neg(n2);

  // Row l0 sends every lane to address l1 = l0*gle mod N1; the carry
  // c = floor(l0*gle / N1) offsets the memory index of each lane.
  u64 acc = 0;
  for (std::size_t l0 = 0; l0 < n1; ++l0, acc += gle) {
    std::size_t l1 = acc % n1;
    const u64 carry = acc / n1;
    if (fault == ShuffleFault::address_off_by_one) l1 = (l1 + 1) % n1;

    for (std::size_t j = 0; j < n2; ++j) {
      val[j] = p.coeffs[j * n1 + l0];
      const u64 wide = (static_cast<u64>(j) * gle + carry) % two_n2;
      dst[j] = wide % n2;
      neg[j] = wide >= n2;
    }
    // Stage s exchanges lanes x and x^2^s when the lane at x is bound for
    // the upper half. Odd multipliers keep every stage conflict-free.
    for (int s = 0; s < stages; ++s) {
      const std::size_t bit = std::size_t{1} << s;
      for (std::size_t x = 0; x < n2; ++x) {
        if (x & bit) continue;
        const std::size_t y = x | bit;
        if (dst[x] & bit) {
          std::swap(val[x], val[y]);
          std::swap(dst[x], dst[y]);
          std::swap(neg[x], neg[y]);
        }
      }
    }
    for (std::size_t j = 0; j < n2; ++j) {
      out.coeffs[j * n1 + l1] = neg[j] ? mod_neg(val[j], m) : val[j];
    }
  }
  if (stats) {
    stats->rows = n1;
    stats->stages_per_row = static_cast<std::size_t>(stages);
  }
  return out;
}

}  // namespace chipfhe
