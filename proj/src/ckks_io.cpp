// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <istream>
#include <ostream>

#include "chipfhe/ckks.hpp"
#include "chipfhe/serial.hpp"

namespace chipfhe {

namespace {

constexpr std::uint32_t kCtMagic = 0x54434643;   // "CFCT"
constexpr std::uint32_t kKeyMagic = 0x534b4643;  // "CFKS"

void write_rns(std::ostream& os, const RnsPoly& p) {
  serial::put_u32(os, static_cast<std::uint32_t>(p.level));
  serial::put_u32(os, static_cast<std::uint32_t>(p.limbs.size()));
  for (const Poly& l : p.limbs) write_poly(os, l);
}

RnsPoly read_rns(std::istream& is, u64 n) {
  RnsPoly p;
  p.level = static_cast<int>(serial::get_u32(is));
  const std::uint32_t count = serial::get_u32(is);
  if (count > 4096) throw FormatError("implausible limb count");
  for (std::uint32_t i = 0; i < count; ++i) {
    p.limbs.push_back(read_poly(is));
    if (p.limbs.back().size() != n) throw FormatError("limb length does not match header");
  }
  return p;
}

void header(std::ostream& os, std::uint32_t magic, u64 n, int level, int dnum, double scale) {
  serial::put_u32(os, magic);
  serial::put_u64(os, n);
  serial::put_u32(os, static_cast<std::uint32_t>(level));
  serial::put_u32(os, static_cast<std::uint32_t>(dnum));
  serial::put_f64(os, scale);
}

}  // namespace

void write_ciphertext(std::ostream& os, const Ciphertext& c, u64 n) {
  header(os, kCtMagic, n, c.level, 0, c.scale);
  write_rns(os, c.c0);
  write_rns(os, c.c1);
}

Ciphertext read_ciphertext(std::istream& is) {
  if (serial::get_u32(is) != kCtMagic) throw FormatError("not a ciphertext");
  const u64 n = serial::get_u64(is);
  Ciphertext c;
  c.level = static_cast<int>(serial::get_u32(is));
  serial::get_u32(is);
  c.scale = serial::get_f64(is);
  c.c0 = read_rns(is, n);
  c.c1 = read_rns(is, n);
  if (c.c0.level != c.level || c.c1.level != c.level) throw FormatError("component level mismatch");
  return c;
}

void write_key(std::ostream& os, const KeySwitchKey& key, u64 n) {
  header(os, kKeyMagic, n, key.l_max, key.dnum, 0.0);
  serial::put_u32(os, static_cast<std::uint32_t>(key.k));
  serial::put_u8(os, key.expanded() ? 1 : 0);
  for (const auto& d : key.digits) {
    write_rns(os, d.ksk0);
    serial::put_u32(os, static_cast<std::uint32_t>(d.ksk1_seeds.size()));
    for (u64 s : d.ksk1_seeds) serial::put_u64(os, s);
    if (key.expanded()) write_rns(os, d.ksk1);
  }
}

KeySwitchKey read_key(std::istream& is) {
  if (serial::get_u32(is) != kKeyMagic) throw FormatError("not a key");
  const u64 n = serial::get_u64(is);
  KeySwitchKey key;
  key.l_max = static_cast<int>(serial::get_u32(is));
  key.dnum = static_cast<int>(serial::get_u32(is));
  serial::get_f64(is);
  key.k = static_cast<int>(serial::get_u32(is));
  const bool expanded = serial::get_u8(is) != 0;
  if (key.dnum <= 0 || key.dnum > 4096) throw FormatError("implausible dnum");
  for (int b = 0; b < key.dnum; ++b) {
    KskDigit d;
    d.ksk0 = read_rns(is, n);
    const std::uint32_t seeds = serial::get_u32(is);
    if (seeds != d.ksk0.limbs.size()) throw FormatError("seed count does not match limbs");
    for (std::uint32_t i = 0; i < seeds; ++i) d.ksk1_seeds.push_back(serial::get_u64(is));
    if (expanded) d.ksk1 = read_rns(is, n);
    key.digits.push_back(std::move(d));
  }
  return key;
}

}  // namespace chipfhe
