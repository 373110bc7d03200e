// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "chipfhe/ckks.hpp"

namespace chipfhe::detail {

inline u64 reduce_to(u64 v, const PrimeModulus& m) { return v >= m.q ? v % m.q : v; }

/// Rounded Gaussian, resampled outside 6 sigma.
inline std::vector<std::int64_t> sample_gaussian(std::mt19937_64& rng, std::size_t n, double sigma) {
  std::normal_distribution<double> dist(0.0, sigma);
  const double bound = 6.0 * sigma;
  std::vector<std::int64_t> out(n);
  for (auto& v : out) {
    double x;
    do x = dist(rng);
    while (std::abs(x) > bound);
    v = std::llround(x);
  }
  return out;
}

inline void sample_uniform(std::mt19937_64& rng, Poly& p, const PrimeModulus& m) {
  std::uniform_int_distribution<u64> dist(0, m.q - 1);
  for (auto& c : p.coeffs) c = dist(rng);
}

/// Fast base conversion from `src` to `tgt` moduli (global ids).
class BaseConverter {
 public:
  BaseConverter(const CkksContext& ctx, std::vector<std::uint32_t> src, std::vector<std::uint32_t> tgt);

  /// in[i] holds coefficients mod src[i]; returns coefficient-domain limbs for tgt.
  std::vector<Poly> apply(const std::vector<const Poly*>& in) const;

 private:
  const CkksContext& ctx_;
  std::vector<std::uint32_t> src_, tgt_;
  std::vector<u64> hat_inv_;
  std::vector<std::vector<u64>> hat_;
};

/// Coefficient-domain conversion of `sources` into each target, with the
/// single-source case reduced directly. Returns NTT-domain limbs.
std::vector<Poly> convert_limbs(const CkksContext& ctx, const std::vector<const Poly*>& sources,
                                const std::vector<std::uint32_t>& targets);

}  // namespace chipfhe::detail
