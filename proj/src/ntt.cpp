// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "chipfhe/polykernel.hpp"

namespace chipfhe {

namespace {

// Cooley-Tukey butterflies for a size-`len` negacyclic transform whose
// elements are blocks of `block` contiguous words placed `block` apart.
// Twiddles come from the first `len` entries of the bit-reversed table.
void ct_blocks(u64* x, std::size_t len, std::size_t block, const TwiddleTable& tw) {
  const PrimeModulus& m = tw.modulus();
  const u64* g = tw.fwd().data();
  const u64* gs = tw.fwd_shoup().data();
  std::size_t t = len / 2;
  for (std::size_t mm = 1; mm < len; mm <<= 1, t >>= 1) {
    for (std::size_t i = 0; i < mm; ++i) {
      const u64 s = g[mm + i];
      const u64 ss = gs[mm + i];
      const std::size_t j1 = 2 * i * t;
      for (std::size_t j = j1; j < j1 + t; ++j) {
        u64* u = x + j * block;
        u64* v = x + (j + t) * block;
        for (std::size_t a = 0; a < block; ++a) {
          u64 vv = mul_shoup(v[a], s, ss, m);
          u64 uu = u[a];
          u[a] = mod_add(uu, vv, m);
          v[a] = mod_sub(uu, vv, m);
        }
      }
    }
  }
}

void check_poly(const Poly& p, const TwiddleTable& t) {
  if (p.size() != t.n()) throw PlanMismatch("poly length " + std::to_string(p.size()) + " != N");
}

}  // namespace

void ntt_inplace(u64* a, const TwiddleTable& t) { ct_blocks(a, t.n(), 1, t); }

void intt_inplace(u64* a, const TwiddleTable& tw) {
  const PrimeModulus& m = tw.modulus();
  const std::size_t n = tw.n();
  const u64* g = tw.inv().data();
  const u64* gs = tw.inv_shoup().data();
  std::size_t t = 1;
  for (std::size_t mm = n; mm > 1; mm >>= 1, t <<= 1) {
    const std::size_t h = mm / 2;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i, j1 += 2 * t) {
      const u64 s = g[h + i];
      const u64 ss = gs[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        u64 u = a[j];
        u64 v = a[j + t];
        a[j] = mod_add(u, v, m);
        a[j + t] = mul_shoup(mod_sub(u, v, m), s, ss, m);
      }
    }
  }
  const u64 ni = m.n_inv;
  const u64 nis = shoup_precompute(ni, m);
  for (std::size_t j = 0; j < n; ++j) a[j] = mul_shoup(a[j], ni, nis, m);
}

Poly ntt_reference(const Poly& p, const TwiddleTable& t) {
  if (p.domain != Domain::coeff) throw DomainError("ntt_reference expects coefficient domain");
  check_poly(p, t);
  Poly out = p;
  ntt_inplace(out.coeffs.data(), t);
  out.domain = Domain::ntt;
  return out;
}

Poly intt_reference(const Poly& p, const TwiddleTable& t) {
  if (p.domain != Domain::ntt) throw DomainError("intt_reference expects NTT domain");
  check_poly(p, t);
  Poly out = p;
  intt_inplace(out.coeffs.data(), t);
  out.domain = Domain::coeff;
  return out;
}

Poly ntt_hybrid(const Poly& p, const TwiddleTable& tw, const NttPlan& plan) {
  if (p.domain != Domain::coeff) throw DomainError("ntt_hybrid expects coefficient domain");
  check_poly(p, tw);
  const std::size_t n = tw.n();
  const std::size_t n1 = plan.n1, n2 = plan.n2;
  if (n1 == 0 || n2 == 0 || n1 * n2 != n || (n1 & (n1 - 1)) || (n2 & (n2 - 1))) {
    throw PlanMismatch("plan " + std::to_string(n1) + "x" + std::to_string(n2) + " does not factor N=" +
                       std::to_string(n));
  }
  const PrimeModulus& m = tw.modulus();
  const int log_n2 = log2_exact(n2);
  Poly out = p;
  u64* x = out.coeffs.data();

  // Across memories: N1 transforms of size N2, one per address, run lane-wise.
  ct_blocks(x, n2, n1, tw);

  // Memory k2 now holds frequency e2 = bitrev(k2); scale address a by
  // psi^(a * (2 e2 + 1 - N2)).
  const u64 two_n = m.two_n;
  for (std::size_t k2 = 0; k2 < n2; ++k2) {
    const u64 e2 = bit_reverse(k2, log_n2);
    const u64 step = (2 * e2 + 1 + two_n - n2) % two_n;
    u64* row = x + k2 * n1;
    if (plan.twiddle_mode == TwiddleMode::on_the_fly) {
      TwiddleStream s(m, 0, step);
      for (std::size_t a = 0; a < n1; ++a) row[a] = mod_mul(row[a], s.next(), m);
    } else {
      for (std::size_t a = 0; a < n1; ++a) row[a] = mod_mul(row[a], tw.natural((a * step) % two_n), m);
    }
  }

  // Within each memory: N2 transforms of size N1 on contiguous words.
  for (std::size_t k2 = 0; k2 < n2; ++k2) ct_blocks(x + k2 * n1, n1, 1, tw);

  out.domain = Domain::ntt;
  return out;
}

}  // namespace chipfhe
