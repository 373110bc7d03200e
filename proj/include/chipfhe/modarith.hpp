// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "chipfhe/error.hpp"

namespace chipfhe {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr int kMaxModulusBits = 54;

/// An NTT-friendly prime q = 1 (mod 2N) with a primitive 2N-th root psi.
/// Reduction constants follow the Barrett form: mu = floor(2^(2k) / q).
struct PrimeModulus {
  u64 q = 0;
  u64 two_n = 0;
  u64 psi = 0;
  u64 psi_inv = 0;
  u64 n_inv = 0;
  int bits = 0;
  u64 barrett_mu = 0;

  u64 n() const { return two_n / 2; }
};

/// Builds a PrimeModulus for a known prime q and ring degree (two_n = 2N).
/// Throws NoPrimeFound if q is not prime or not 1 mod two_n.
PrimeModulus make_modulus(u64 q, u64 two_n);

inline u64 mod_add(u64 a, u64 b, const PrimeModulus& m) {
  u64 s = a + b;
  return s >= m.q ? s - m.q : s;
}

inline u64 mod_sub(u64 a, u64 b, const PrimeModulus& m) {
  return a >= b ? a - b : a + m.q - b;
}

inline u64 mod_neg(u64 a, const PrimeModulus& m) { return a == 0 ? 0 : m.q - a; }

/// Barrett reduction of a double-word value x < q^2.
inline u64 barrett_reduce(u128 x, const PrimeModulus& m) {
  const int k = m.bits;
  u128 t = (x >> (k - 1)) * m.barrett_mu;
  u64 qhat = static_cast<u64>(t >> (k + 1));
  u64 r = static_cast<u64>(x - static_cast<u128>(qhat) * m.q);
  // At most two corrections; written branch-free.
  r -= m.q & (0 - static_cast<u64>(r >= m.q));
  r -= m.q & (0 - static_cast<u64>(r >= m.q));
  return r;
}

inline u64 mod_mul(u64 a, u64 b, const PrimeModulus& m) {
  assert(a < m.q && b < m.q);
  return barrett_reduce(static_cast<u128>(a) * b, m);
}

/// Shoup precomputation for a fixed multiplicand w: floor(w * 2^64 / q).
inline u64 shoup_precompute(u64 w, const PrimeModulus& m) {
  return static_cast<u64>((static_cast<u128>(w) << 64) / m.q);
}

inline u64 mul_shoup(u64 a, u64 w, u64 w_shoup, const PrimeModulus& m) {
  u64 qhat = static_cast<u64>((static_cast<u128>(a) * w_shoup) >> 64);
  u64 r = a * w - qhat * m.q;
  return r >= m.q ? r - m.q : r;
}

u64 mod_pow(u64 base, u64 exp, const PrimeModulus& m);
u64 mod_inv(u64 a, const PrimeModulus& m);

/// Reduction and exponentiation for arbitrary 64-bit moduli (not necessarily prime).
u64 mulmod64(u64 a, u64 b, u64 mod);
u64 powmod64(u64 base, u64 exp, u64 mod);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(u64 n);

/// The (skip+1)-th prime q with exactly `bits` bits and q = 1 (mod two_n),
/// searched upward from 2^(bits-1).
PrimeModulus find_ntt_prime(int bits, u64 two_n, int skip = 0);

/// Multiplicative order check used as a post-condition on psi.
bool has_order(u64 x, u64 order, const PrimeModulus& m);

std::size_t bit_reverse(std::size_t x, int log_n);
int log2_exact(u64 n);

enum class TwiddleMode { stored, on_the_fly };

/// Powers of psi for one modulus. `index` runs over [0, 2N) in natural order;
/// the bit-reversed view used by the transforms is exposed separately.
class TwiddleTable {
 public:
  explicit TwiddleTable(const PrimeModulus& m);

  const PrimeModulus& modulus() const { return mod_; }
  std::size_t n() const { return n_; }

  /// psi^index, 0 <= index < 2N.
  u64 natural(std::size_t index) const { return pow_[index]; }

  /// psi^bitrev(k) for k < N, and the matching inverse/Shoup tables.
  const std::vector<u64>& fwd() const { return fwd_; }
  const std::vector<u64>& fwd_shoup() const { return fwd_shoup_; }
  const std::vector<u64>& inv() const { return inv_; }
  const std::vector<u64>& inv_shoup() const { return inv_shoup_; }

 private:
  PrimeModulus mod_;
  std::size_t n_;
  std::vector<u64> pow_;
  std::vector<u64> fwd_, fwd_shoup_, inv_, inv_shoup_;
};

/// Streams psi^start, psi^(start+step), ... by incremental multiplication.
class TwiddleStream {
 public:
  TwiddleStream(const PrimeModulus& m, u64 start_exp, u64 step_exp);
  u64 next();

 private:
  PrimeModulus mod_;
  u64 cur_;
  u64 step_;
};

/// psi^index in either mode. The on-the-fly path multiplies through the
/// binary expansion of index starting from psi, with no stored table.
u64 twiddle(const TwiddleTable& table, std::size_t index, TwiddleMode mode);

/// RNS basis: L+1 ciphertext primes and K special primes for key switching.
struct RnsBasis {
  std::vector<PrimeModulus> q_list;
  std::vector<PrimeModulus> p_list;
  u64 n = 0;
  int l_max = 0;
  int dnum = 0;
  int k = 0;
  int word_bits = 0;
  bool insecure = true;

  /// phat[i][j] = (P / p_i) mod t_j and phat_inv[i] = (P / p_i)^-1 mod p_i,
  /// with t_j running over q_list.
  std::vector<std::vector<u64>> phat;
  std::vector<u64> phat_inv;

  std::size_t total_moduli() const { return q_list.size() + p_list.size(); }
  const PrimeModulus& modulus(std::size_t id) const {
    return id < q_list.size() ? q_list[id] : p_list[id - q_list.size()];
  }
  /// Global id of special prime k.
  std::size_t p_id(std::size_t k_index) const { return q_list.size() + k_index; }
};

/// Generates q_0..q_L (q_bits each) then p_0..p_{K-1} (p_bits each), all
/// distinct, with K = ceil((L+1)/dnum).
RnsBasis make_basis(u64 n, int l_max, int dnum, int q_bits, int p_bits);

/// Recomputes the phat constants after the prime lists are set.
void finalize_basis(RnsBasis& b);

std::string basis_to_json(const RnsBasis& b);
RnsBasis basis_from_json(const std::string& text);

}  // namespace chipfhe
