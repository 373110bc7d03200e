// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include "chipfhe/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace chipfhe::analytic {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) { return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_}; }
Rational operator-(Rational a, Rational b) { return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_}; }
Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
Rational operator/(Rational a, Rational b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
bool operator<(Rational a, Rational b) { return a.num_ * b.den_ < b.num_ * a.den_; }

void FormulaInputs::validate() const {
  auto positive = [](bool ok, const char* field) {
    if (!ok) throw ConfigError(std::string(field) + " must be positive");
  };
  positive(l >= 0, "l");
  positive(L > 0, "L");
  positive(K > 0, "K");
  positive(dnum > 0, "dnum");
  positive(r > 0, "r");
  positive(n1 > 0, "n1");
  positive(n2 > 0, "n2");
  positive(f > 0, "f");
  positive(k_ratio > 0, "k_ratio");
  if (static_cast<long>(dnum) * K < L + 1) throw ConfigError("dnum * K must cover L + 1");
  if (l > L) throw ConfigError("l exceeds L");
}

std::uint64_t keyswitch_cycles(int L, std::uint64_t n1, bool shadowed) {
  const std::uint64_t limbs = static_cast<std::uint64_t>(L) + 1;
  const std::uint64_t per = shadowed ? static_cast<std::uint64_t>(L) + 3 : 1 + 3 * (static_cast<std::uint64_t>(L) + 2);
  return limbs * per * n1;
}

double keyswitch_throughput(const FormulaInputs& in, bool shadowed) {
  in.validate();
  return in.f / static_cast<double>(keyswitch_cycles(in.L, in.n1, shadowed));
}

Rational shadow_improvement(int L) { return Rational(1) - Rational(L + 3, 1 + 3 * (L + 2)); }

Technique parse_technique(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "a") return Technique::A;
  if (s == "b") return Technique::B;
  if (s == "c") return Technique::C;
  if (s == "ours") return Technique::OURS;
  if (s == "digitwise") return Technique::DIGITWISE;
  if (s == "digitwise_split") return Technique::DIGITWISE_SPLIT;
  if (s == "limb_all2all") return Technique::LIMB_ALL2ALL;
  if (s == "limb_early") return Technique::LIMB_EARLY;
  if (s == "coeff") return Technique::COEFF;
  throw ConfigError("unknown technique '" + name + "'");
}

std::string technique_name(Technique t) {
  switch (t) {
    case Technique::A: return "A";
    case Technique::B: return "B";
    case Technique::C: return "C";
    case Technique::OURS: return "OURS";
    case Technique::DIGITWISE: return "DIGITWISE";
    case Technique::DIGITWISE_SPLIT: return "DIGITWISE_SPLIT";
    case Technique::LIMB_ALL2ALL: return "LIMB_ALL2ALL";
    case Technique::LIMB_EARLY: return "LIMB_EARLY";
    case Technique::COEFF: return "COEFF";
  }
  return "?";
}

Rational comm_polynomials(Technique t, int l, int dnum, int K, int r) {
  switch (t) {
    case Technique::A: return Rational((l + 3) * (l + 2));
    case Technique::B:
    case Technique::C: return Rational((l + 1) * (l + 4));
    case Technique::OURS: return Rational(r * (l + 3));
    case Technique::DIGITWISE: return Rational(2 * (dnum - 1) * (l + 1), dnum) + Rational(2 * K);
    case Technique::DIGITWISE_SPLIT: return Rational(2 * (dnum - 1) * (l + K + 1), dnum) + Rational(2 * K);
    case Technique::LIMB_ALL2ALL: return Rational(2 * (dnum - 1) * (l + K + 1));
    case Technique::LIMB_EARLY: return Rational((dnum - 1) * (l + K + 1));
    case Technique::COEFF: return Rational((dnum + 2) * (l + K + 1));
  }
  return {};
}

int chiplet_bound(int L, double k_ratio, double u) {
  if (k_ratio <= 0 || u <= 0) throw DomainError("k and u must be positive");
  const double bound = std::floor((L + 2) / (u * k_ratio));
  return static_cast<int>(std::min<double>(bound, L + 2));
}

KeyStorage key_storage(int L, int dnum, std::uint64_t n, int w) {
  const std::uint64_t k = (static_cast<std::uint64_t>(L) + dnum) / dnum;  // ceil((L+1)/dnum)
  const std::uint64_t limbs = static_cast<std::uint64_t>(L) + k + 1;
  const std::uint64_t poly = (n * static_cast<std::uint64_t>(w) + 7) / 8;
  KeyStorage s;
  s.per_digit_limb = poly;
  s.expanded = 2 * dnum * limbs * poly;
  s.seeded = dnum * limbs * (poly + 8);
  return s;
}

namespace {

struct TwiddleRow {
  std::uint64_t n1, n2, total, tfg_mul, tfg_mem, stored_mem;
};

constexpr std::array<TwiddleRow, 6> kTwiddleTable{{
    {2048, 32, 432, 68, 222912, 4260320},
    {1024, 64, 832, 131, 310624, 4228064},
    {512, 128, 1600, 258, 486400, 4212704},
    {256, 256, 3072, 513, 707232, 4206560},
    {128, 512, 5888, 1024, 1149248, 4206560},
    {64, 1024, 11264, 2047, 1771488, 4212704},
}};

}  // namespace

TwiddleCost twiddle_tradeoff(std::uint64_t n1, std::uint64_t n2, bool tfg) {
  for (const auto& row : kTwiddleTable) {
    if (row.n1 == n1 && row.n2 == n2)
      return tfg ? TwiddleCost{row.total, row.tfg_mul, row.tfg_mem} : TwiddleCost{row.total, 0, row.stored_mem};
  }
  throw UnsupportedConfig(std::to_string(n1) + "x" + std::to_string(n2) + " is outside the tabulated splits");
}

Rational digit_flow_census(int l, int dnum, int K, int r) {
  return Rational(2 * (l + 1 + K) + (dnum + 1) * (l + 1) + (r - 3) * K, r);
}

KeySwitchCensus keyswitch_census_full(int l) {
  const std::uint64_t n = static_cast<std::uint64_t>(l) + 1;
  KeySwitchCensus c;
  c.modup = {n, n * (n + 1), 0, 0};
  c.keymul = {0, 0, 2 * n * (n + 1), 0};
  c.moddown = {2, 2 * n, 4 * n, 0};
  return c;
}

KeySwitchCensus keyswitch_census_generic(int l, int K) {
  const std::uint64_t n = static_cast<std::uint64_t>(l) + 1, k = static_cast<std::uint64_t>(K);
  KeySwitchCensus c;
  c.modup.intt = n;
  for (std::uint64_t lo = 0; lo < n; lo += k) {
    const std::uint64_t kb = std::min(k, n - lo);
    const std::uint64_t targets = n + k - kb;
    c.modup.ntt += targets;
    if (kb > 1) c.modup.bconv += kb * (1 + targets);
    c.keymul.mas += 2 * (n + k);
  }
  c.moddown = {2 * k, 2 * n, 4 * n, k > 1 ? 2 * k * (n + 1) : 0};
  return c;
}

}  // namespace chipfhe::analytic
