// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include "chipfhe/modarith.hpp"

#include <algorithm>
#include <bit>

namespace chipfhe {

u64 mulmod64(u64 a, u64 b, u64 mod) {
  return static_cast<u64>((static_cast<u128>(a) * b) % mod);
}

u64 powmod64(u64 base, u64 exp, u64 mod) {
  u64 result = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) result = mulmod64(result, base, mod);
    base = mulmod64(base, base, mod);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static const u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for n < 3.3e24.
  for (u64 a : small) {
    u64 x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int log2_exact(u64 n) {
  if (n == 0 || (n & (n - 1)) != 0) throw Error("log2_exact: not a power of two");
  return std::countr_zero(n);
}

std::size_t bit_reverse(std::size_t x, int log_n) {
  std::size_t r = 0;
  for (int i = 0; i < log_n; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

u64 mod_pow(u64 base, u64 exp, const PrimeModulus& m) {
  u64 result = 1;
  base %= m.q;
  while (exp) {
    if (exp & 1) result = mod_mul(result, base, m);
    base = mod_mul(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 mod_inv(u64 a, const PrimeModulus& m) {
  if (a % m.q == 0) throw Error("mod_inv: zero has no inverse");
  return mod_pow(a, m.q - 2, m);
}

bool has_order(u64 x, u64 order, const PrimeModulus& m) {
  if (mod_pow(x, order, m) != 1) return false;
  // order is a power of two here, so checking order/2 suffices.
  return order == 1 || mod_pow(x, order / 2, m) != 1;
}

namespace {

PrimeModulus reduction_only(u64 q) {
  PrimeModulus m;
  m.q = q;
  m.bits = std::bit_width(q);
  m.barrett_mu = static_cast<u64>((static_cast<u128>(1) << (2 * m.bits)) / q);
  return m;
}

}  // namespace

PrimeModulus make_modulus(u64 q, u64 two_n) {
  if (q < 3 || std::bit_width(q) > 62 || !is_prime(q)) {
    throw NoPrimeFound("modulus " + std::to_string(q) + " is not a usable prime");
  }
  if (two_n < 2 || (q - 1) % two_n != 0) {
    throw NoPrimeFound("modulus " + std::to_string(q) + " is not 1 mod " + std::to_string(two_n));
  }
  PrimeModulus m = reduction_only(q);
  m.two_n = two_n;
  const u64 n = two_n / 2;
  const u64 cofactor = (q - 1) / two_n;
  for (u64 g = 2; g < q; ++g) {
    u64 cand = mod_pow(g, cofactor, m);
    if (mod_pow(cand, n, m) == q - 1) {
      m.psi = cand;
      break;
    }
  }
  if (m.psi == 0) throw NoPrimeFound("no primitive root found");
  m.psi_inv = mod_inv(m.psi, m);
  m.n_inv = mod_inv(n % q, m);
  return m;
}

PrimeModulus find_ntt_prime(int bits, u64 two_n, int skip) {
  if (bits < 2 || bits > kMaxModulusBits) {
    throw NoPrimeFound("bit length " + std::to_string(bits) + " outside [2, 54]");
  }
  if (two_n == 0 || (two_n & (two_n - 1)) != 0) throw NoPrimeFound("two_n must be a power of two");
  const u64 lo = u64{1} << (bits - 1);
  const u64 hi = u64{1} << bits;
  // Smallest candidate >= lo that is 1 mod two_n.
  u64 cand = (lo / two_n) * two_n + 1;
  if (cand < lo) cand += two_n;
  int found = 0;
  for (; cand < hi; cand += two_n) {
    if (!is_prime(cand)) continue;
    if (found++ == skip) return make_modulus(cand, two_n);
  }
  throw NoPrimeFound("exhausted " + std::to_string(bits) + "-bit candidates for 2N=" +
                     std::to_string(two_n));
}

TwiddleTable::TwiddleTable(const PrimeModulus& m) : mod_(m), n_(m.n()) {
  const int log_n = log2_exact(n_);
  pow_.resize(2 * n_);
  pow_[0] = 1;
  for (std::size_t i = 1; i < 2 * n_; ++i) pow_[i] = mod_mul(pow_[i - 1], m.psi, m);
  fwd_.resize(n_);
  fwd_shoup_.resize(n_);
  inv_.resize(n_);
  inv_shoup_.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t e = bit_reverse(k, log_n);
    fwd_[k] = pow_[e];
    inv_[k] = e == 0 ? 1 : pow_[2 * n_ - e];
    fwd_shoup_[k] = shoup_precompute(fwd_[k], m);
    inv_shoup_[k] = shoup_precompute(inv_[k], m);
  }
}

TwiddleStream::TwiddleStream(const PrimeModulus& m, u64 start_exp, u64 step_exp)
    : mod_(m), cur_(mod_pow(m.psi, start_exp % m.two_n, m)), step_(mod_pow(m.psi, step_exp % m.two_n, m)) {}

u64 TwiddleStream::next() {
  u64 out = cur_;
  cur_ = mod_mul(cur_, step_, mod_);
  return out;
}

u64 twiddle(const TwiddleTable& table, std::size_t index, TwiddleMode mode) {
  const PrimeModulus& m = table.modulus();
  if (index >= m.two_n) throw Error("twiddle index out of range");
  if (mode == TwiddleMode::stored) return table.natural(index);
  u64 acc = 1;
  u64 base = m.psi;
  for (std::size_t e = index; e; e >>= 1) {
    if (e & 1) acc = mod_mul(acc, base, m);
    base = mod_mul(base, base, m);
  }
  return acc;
}

void finalize_basis(RnsBasis& b) {
  const std::size_t kk = b.p_list.size();
  b.phat.assign(kk, std::vector<u64>(b.q_list.size()));
  b.phat_inv.assign(kk, 0);
  for (std::size_t i = 0; i < kk; ++i) {
    const PrimeModulus& pi = b.p_list[i];
    u64 prod = 1;
    for (std::size_t j = 0; j < kk; ++j) {
      if (j != i) prod = mod_mul(prod, b.p_list[j].q % pi.q, pi);
    }
    b.phat_inv[i] = mod_inv(prod, pi);
    for (std::size_t t = 0; t < b.q_list.size(); ++t) {
      const PrimeModulus& qt = b.q_list[t];
      u64 v = 1;
      for (std::size_t j = 0; j < kk; ++j) {
        if (j != i) v = mod_mul(v, b.p_list[j].q % qt.q, qt);
      }
      b.phat[i][t] = v;
    }
  }
}

RnsBasis make_basis(u64 n, int l_max, int dnum, int q_bits, int p_bits) {
  if (dnum < 1 || dnum > l_max + 1) throw Error("dnum must lie in [1, L+1]");
  RnsBasis b;
  b.n = n;
  b.l_max = l_max;
  b.dnum = dnum;
  b.k = (l_max + 1 + dnum - 1) / dnum;
  b.word_bits = std::max(q_bits, p_bits);
  const u64 two_n = 2 * n;
  int skip = 0;
  for (int i = 0; i <= l_max; ++i) b.q_list.push_back(find_ntt_prime(q_bits, two_n, skip++));
  int pskip = q_bits == p_bits ? skip : 0;
  for (int i = 0; i < b.k; ++i) b.p_list.push_back(find_ntt_prime(p_bits, two_n, pskip++));
  finalize_basis(b);
  return b;
}

}  // namespace chipfhe
