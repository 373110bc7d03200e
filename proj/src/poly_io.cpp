// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <istream>
#include <ostream>

#include "chipfhe/polykernel.hpp"
#include "chipfhe/serial.hpp"

namespace chipfhe {

void write_poly(std::ostream& os, const Poly& p) {
  serial::put_u64(os, p.size());
  serial::put_u32(os, p.modulus_id);
  serial::put_u8(os, static_cast<std::uint8_t>(p.domain));
  for (u64 c : p.coeffs) serial::put_u64(os, c);
}

Poly read_poly(std::istream& is) {
  const u64 n = serial::get_u64(is);
  if (n == 0 || n > (u64{1} << 20)) throw FormatError("poly header: implausible N");
  Poly p;
  p.modulus_id = serial::get_u32(is);
  const std::uint8_t d = serial::get_u8(is);
  if (d > 1) throw FormatError("poly header: bad domain tag");
  p.domain = static_cast<Domain>(d);
  p.coeffs.resize(n);
  for (auto& c : p.coeffs) c = serial::get_u64(is);
  return p;
}

}  // namespace chipfhe
