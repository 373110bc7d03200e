// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "chipfhe/error.hpp"

namespace chipfhe::analytic {

/// Exact fraction with positive denominator, kept in lowest terms.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(Rational a, Rational b);

 private:
  std::int64_t num_, den_;
};

struct FormulaInputs {
  int l = 30;
  int L = 30;
  int K = 1;
  int dnum = 31;
  int r = 4;
  std::uint64_t n1 = 1024;
  std::uint64_t n2 = 64;
  double f = 1.5e9;
  double k_ratio = 1.2 / 0.63;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Cycles per dnum = L+1 KeySwitch: (L+1)(L+3)N1 shadowed, (L+1)(1+3(L+2))N1 naive.
std::uint64_t keyswitch_cycles(int L, std::uint64_t n1, bool shadowed);
double keyswitch_throughput(const FormulaInputs& in, bool shadowed);
/// 1 - (L+3)/(1+3(L+2)).
Rational shadow_improvement(int L);

enum class Technique { A, B, C, OURS, DIGITWISE, DIGITWISE_SPLIT, LIMB_ALL2ALL, LIMB_EARLY, COEFF };

Technique parse_technique(const std::string& name);
std::string technique_name(Technique t);

/// Polynomials in communication per KeySwitch. OURS counts r(l+3).
/// DIGITWISE (key products duplicated, 2(dnum-1)(l+1)/dnum + 2K) and
/// DIGITWISE_SPLIT (ModDown split, 2(dnum-1)(l+K+1)/dnum + 2K) are per
/// chiplet; the rest are totals.
Rational comm_polynomials(Technique t, int l, int dnum, int K, int r);

/// floor((L+2) / (u k)), capped at L+2.
int chiplet_bound(int L, double k_ratio, double u = 4.0);

struct KeyStorage {
  std::uint64_t expanded = 0;      // 2 dnum (L+K+1) N w/8
  std::uint64_t seeded = 0;        // ksk0 plus one 8-byte seed per limb
  std::uint64_t per_digit_limb = 0;  // one residue polynomial, N w/8
};

KeyStorage key_storage(int L, int dnum, std::uint64_t n, int w);

struct TwiddleCost {
  std::uint64_t multipliers_total = 0;
  std::uint64_t multipliers_tfg = 0;
  std::uint64_t memory_words = 0;
};

/// Table lookup over the six published (N1, N2) splits of N = 2^16.
/// Throws UnsupportedConfig otherwise.
TwiddleCost twiddle_tradeoff(std::uint64_t n1, std::uint64_t n2, bool tfg);

/// Per-chiplet NTT-equivalent count of the digit flow:
/// (2(l+1+K) + (dnum+1)(l+1) + (r-3)K) / r.
Rational digit_flow_census(int l, int dnum, int K, int r);

/// Closed-form KeySwitch operation counts (both components) for the two
/// functional algorithms; phases follow the ckks census.
struct PhaseCounts {
  std::uint64_t intt = 0, ntt = 0, mas = 0, bconv = 0;
  bool operator==(const PhaseCounts&) const = default;
};
struct KeySwitchCensus {
  PhaseCounts modup, keymul, moddown;
};

KeySwitchCensus keyswitch_census_full(int l);
KeySwitchCensus keyswitch_census_generic(int l, int K);

}  // namespace chipfhe::analytic
