// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include "chipfhe/trivium.hpp"

namespace chipfhe {

namespace {

constexpr int kLenA = 93, kLenB = 84, kLenC = 111;
constexpr u64 kAll = ~u64{0};

// 64 consecutive values of tap x: bit k is s_(x-k) before the batch.
template <int Len>
inline u64 tap(u128 r, int x) {
  return static_cast<u64>(r >> (Len - x)) & kAll;
}

template <int Len>
inline u128 shift_in(u128 r, u64 w) {
  return (r >> 64) | (static_cast<u128>(w) << (Len - 64));
}

}  // namespace

Trivium::Trivium(u64 seed) {
  for (int k = 0; k < 64; ++k) {
    const u128 bit = (seed >> k) & 1;
    a_ |= bit << (kLenA - (k + 1));
    b_ |= bit << (kLenB - (k + 1));
  }
  c_ |= u128{7};  // s286, s287, s288
  for (int i = 0; i < kInitRounds; ++i) next();
}

u64 Trivium::next() {
  const u64 a66 = tap<kLenA>(a_, 66), a93 = tap<kLenA>(a_, 93);
  const u64 b69 = tap<kLenB>(b_, 69), b84 = tap<kLenB>(b_, 84);
  const u64 c66 = tap<kLenC>(c_, 66), c111 = tap<kLenC>(c_, 111);
  u64 t1 = a66 ^ a93;
  u64 t2 = b69 ^ b84;
  u64 t3 = c66 ^ c111;
  const u64 z = t1 ^ t2 ^ t3;
  t1 ^= (tap<kLenA>(a_, 91) & tap<kLenA>(a_, 92)) ^ tap<kLenB>(b_, 78);
  t2 ^= (tap<kLenB>(b_, 82) & tap<kLenB>(b_, 83)) ^ tap<kLenC>(c_, 87);
  t3 ^= (tap<kLenC>(c_, 109) & tap<kLenC>(c_, 110)) ^ tap<kLenA>(a_, 69);
  a_ = shift_in<kLenA>(a_, t3);
  b_ = shift_in<kLenB>(b_, t1);
  c_ = shift_in<kLenC>(c_, t2);
  return z;
}

std::vector<u64> trivium_stream(u64 seed, std::size_t count) {
  Trivium t(seed);
  std::vector<u64> out(count);
  for (auto& w : out) w = t.next();
  return out;
}

void expand_uniform(u64 seed, const PrimeModulus& m, u64* out, std::size_t count) {
  Trivium t(seed);
  const u64 mask = m.bits >= 64 ? kAll : (u64{1} << m.bits) - 1;
  for (std::size_t i = 0; i < count;) {
    const u64 w = t.next() & mask;
    if (w < m.q) out[i++] = w;
  }
}

}  // namespace chipfhe
