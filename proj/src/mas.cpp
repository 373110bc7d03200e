// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include "chipfhe/polykernel.hpp"

namespace chipfhe {

Poly mas(MasOp op, const Poly& a, const Poly& b, const Poly* acc, const PrimeModulus& m) {
  if (a.modulus_id != b.modulus_id || a.size() != b.size()) throw ModulusMismatch("operands differ in modulus");
  if (a.domain != b.domain) throw DomainMismatch("operands differ in domain");
  if (op == MasOp::mac) {
    if (!acc) throw Error("MAC requires an accumulator");
    if (acc->modulus_id != a.modulus_id || acc->size() != a.size()) throw ModulusMismatch("accumulator modulus");
    if (acc->domain != a.domain) throw DomainMismatch("accumulator domain");
  }
  Poly out(a.size(), a.modulus_id, a.domain);
  const std::size_t n = a.size();
  switch (op) {
    case MasOp::add:
      for (std::size_t i = 0; i < n; ++i) out.coeffs[i] = mod_add(a.coeffs[i], b.coeffs[i], m);
      break;
    case MasOp::sub:
      for (std::size_t i = 0; i < n; ++i) out.coeffs[i] = mod_sub(a.coeffs[i], b.coeffs[i], m);
      break;
    case MasOp::mul:
      for (std::size_t i = 0; i < n; ++i) out.coeffs[i] = mod_mul(a.coeffs[i], b.coeffs[i], m);
      break;
    case MasOp::mac:
      for (std::size_t i = 0; i < n; ++i) {
        out.coeffs[i] = mod_add(acc->coeffs[i], mod_mul(a.coeffs[i], b.coeffs[i], m), m);
      }
      break;
  }
  return out;
}

}  // namespace chipfhe
