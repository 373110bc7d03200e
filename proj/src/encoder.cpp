// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "chipfhe/ckks.hpp"

namespace chipfhe {

namespace {

using cd = std::complex<double>;

struct Embedding {
  std::size_t slots;
  u64 m;                     // 2N
  std::vector<u64> rot;      // 5^j mod 2N
  std::vector<cd> ksi;       // exp(2 pi i k / 2N), k in [0, 2N]

  explicit Embedding(u64 n) : slots(n / 2), m(2 * n), rot(n / 2), ksi(2 * n + 1) {
    u64 g = 1;
    for (auto& r : rot) {
      r = g;
      g = (g * 5) % m;
    }
    for (std::size_t k = 0; k <= m; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
      ksi[k] = {std::cos(a), std::sin(a)};
    }
  }

  void bit_reverse_inplace(std::vector<cd>& v) const {
    const int lg = log2_exact(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::size_t j = bit_reverse(i, lg);
      if (i < j) std::swap(v[i], v[j]);
    }
  }

  // Evaluation at the slot roots: v[j] <- sum_k v[k] * zeta_j^k.
  void forward(std::vector<cd>& v) const {
    bit_reverse_inplace(v);
    for (std::size_t len = 2; len <= slots; len <<= 1) {
      const std::size_t lenh = len / 2, lenq = len * 4, gap = m / lenq;
      for (std::size_t i = 0; i < slots; i += len) {
        for (std::size_t j = 0; j < lenh; ++j) {
          const cd u = v[i + j];
          const cd w = v[i + j + lenh] * ksi[(rot[j] % lenq) * gap];
          v[i + j] = u + w;
          v[i + j + lenh] = u - w;
        }
      }
    }
  }

  void inverse(std::vector<cd>& v) const {
    for (std::size_t len = slots; len >= 2; len >>= 1) {
      const std::size_t lenh = len / 2, lenq = len * 4, gap = m / lenq;
      for (std::size_t i = 0; i < slots; i += len) {
        for (std::size_t j = 0; j < lenh; ++j) {
          const cd u = v[i + j] + v[i + j + lenh];
          const cd w = (v[i + j] - v[i + j + lenh]) * ksi[(lenq - rot[j] % lenq) * gap];
          v[i + j] = u;
          v[i + j + lenh] = w;
        }
      }
    }
    bit_reverse_inplace(v);
    for (auto& x : v) x /= static_cast<double>(slots);
  }
};

}  // namespace

RnsPoly encode(const CkksContext& ctx, const std::vector<std::complex<double>>& slots, double scale, int level) {
  const std::size_t n = ctx.n();
  if (slots.size() > n / 2) throw SlotOverflow(std::to_string(slots.size()) + " slots exceed N/2");
  if (level < 0 || level > ctx.l_max()) throw LevelMismatch("encode level out of range");
  Embedding emb(n);
  std::vector<cd> v(n / 2, cd{0, 0});
  std::copy(slots.begin(), slots.end(), v.begin());
  emb.inverse(v);
  std::vector<std::int64_t> coeffs(n);
  constexpr double kLimit = 9.0e18;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double re = std::round(v[i].real() * scale), im = std::round(v[i].imag() * scale);
    if (std::abs(re) > kLimit || std::abs(im) > kLimit) throw DomainError("scaled value exceeds 63 bits");
    coeffs[i] = static_cast<std::int64_t>(re);
    coeffs[i + n / 2] = static_cast<std::int64_t>(im);
  }
  RnsPoly p = rns_from_signed(ctx, coeffs, level, false);
  to_ntt(ctx, p);
  return p;
}

std::vector<std::complex<double>> decode(const CkksContext& ctx, const RnsPoly& plain, double scale) {
  const std::size_t n = ctx.n();
  const auto m = lift_centered(ctx, plain);
  std::vector<cd> v(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) v[i] = cd{m[i], m[i + n / 2]} / scale;
  Embedding(n).forward(v);
  return v;
}

}  // namespace chipfhe
