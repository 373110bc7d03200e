// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "chipfhe/ckks.hpp"

namespace fixture {

using chipfhe::CkksContext;
using chipfhe::make_basis;
using cvec = std::vector<std::complex<double>>;

inline constexpr double kDelta = 549755813888.0;  // 2^39

/// N = 2^12, L = 8, dnum = 3 (K = 3), 40-bit primes.
inline const CkksContext& toy() {
  static const CkksContext ctx(make_basis(4096, 8, 3, 40, 40));
  return ctx;
}

/// N = 2^10, L = 4, dnum = 5 (K = 1).
inline const CkksContext& full_dnum() {
  static const CkksContext ctx(make_basis(1024, 4, 5, 40, 40));
  return ctx;
}

inline cvec random_slots(std::size_t count, std::uint64_t seed, double bound = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-bound, bound);
  cvec v(count);
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

inline double max_error(const cvec& a, const cvec& b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace fixture
