// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <gmpxx.h>

#include <json.hpp>

#include "chipfhe/ckks.hpp"

namespace chipfhe {

CkksParams toy_params() { return CkksParams{}; }

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  intt += o.intt;
  ntt += o.ntt;
  mas += o.mas;
  bconv += o.bconv;
  aut += o.aut;
  return *this;
}

OpCounts Census::total() const {
  OpCounts t;
  for (const auto& [_, c] : phases) t += c;
  return t;
}

std::string census_to_json(const Census& c, const std::string& routine, int level, int dnum, int k) {
  auto counts = [](const OpCounts& o) {
    return nlohmann::json{{"intt", o.intt}, {"ntt", o.ntt}, {"mas", o.mas}, {"bconv", o.bconv}, {"aut", o.aut}};
  };
  nlohmann::json j;
  j["routine"] = routine;
  j["l"] = level;
  j["dnum"] = dnum;
  j["K"] = k;
  for (const auto& [name, o] : c.phases) j["phases"][name] = counts(o);
  j["total"] = counts(c.total());
  return j.dump(2);
}

namespace {

NttPlan default_plan(u64 n) {
  const int lg = log2_exact(n);
  const std::size_t n2 = std::size_t{1} << (lg / 2);
  return NttPlan{n / n2, n2};
}

}  // namespace

CkksContext::CkksContext(RnsBasis basis, double sigma) : basis_(std::move(basis)), sigma_(sigma) {
  if (basis_.q_list.empty() || basis_.p_list.empty()) throw ConfigError("basis needs q and p primes");
  tables_.reserve(basis_.total_moduli());
  for (std::size_t id = 0; id < basis_.total_moduli(); ++id) tables_.emplace_back(basis_.modulus(id));
  plan_ = default_plan(basis_.n);
  for (const auto& q : basis_.q_list) {
    u64 p = 1;
    for (const auto& pk : basis_.p_list) p = mod_mul(p, pk.q % q.q, q);
    p_mod_q_.push_back(p);
    p_inv_mod_q_.push_back(mod_inv(p, q));
  }
}

RnsPoly::RnsPoly(const CkksContext& ctx, int lvl, bool extended, Domain d) : level(lvl) {
  const std::size_t n = ctx.n();
  for (int i = 0; i <= lvl; ++i) limbs.emplace_back(n, static_cast<std::uint32_t>(i), d);
  if (extended) {
    for (std::size_t k = 0; k < ctx.p_count(); ++k)
      limbs.emplace_back(n, static_cast<std::uint32_t>(ctx.basis().p_id(k)), d);
  }
}

void to_ntt(const CkksContext& ctx, RnsPoly& p) {
  const auto count = static_cast<std::int64_t>(p.limbs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    Poly& limb = p.limbs[i];
    if (limb.domain == Domain::ntt) continue;
    ntt_inplace(limb.coeffs.data(), ctx.table(limb.modulus_id));
    limb.domain = Domain::ntt;
  }
}

void to_coeff(const CkksContext& ctx, RnsPoly& p) {
  const auto count = static_cast<std::int64_t>(p.limbs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    Poly& limb = p.limbs[i];
    if (limb.domain == Domain::coeff) continue;
    intt_inplace(limb.coeffs.data(), ctx.table(limb.modulus_id));
    limb.domain = Domain::coeff;
  }
}

RnsPoly rns_from_signed(const CkksContext& ctx, const std::vector<std::int64_t>& coeffs, int level, bool extended) {
  if (coeffs.size() != ctx.n()) throw DomainError("coefficient count does not match N");
  RnsPoly out(ctx, level, extended, Domain::coeff);
  for (Poly& limb : out.limbs) {
    const u64 q = ctx.modulus(limb.modulus_id).q;
    for (std::size_t x = 0; x < coeffs.size(); ++x) {
      const std::int64_t v = coeffs[x];
      const u64 mag = static_cast<u64>(v < 0 ? -v : v) % q;
      limb.coeffs[x] = (v < 0 && mag != 0) ? q - mag : mag;
    }
  }
  return out;
}

std::vector<double> lift_centered(const CkksContext& ctx, const RnsPoly& p) {
  RnsPoly c = p;
  to_coeff(ctx, c);
  const std::size_t limbs = static_cast<std::size_t>(c.level) + 1;
  mpz_class big_q = 1;
  for (std::size_t i = 0; i < limbs; ++i) big_q *= mpz_class(std::to_string(ctx.modulus(i).q));
  const mpz_class half = big_q / 2;
  std::vector<mpz_class> hat(limbs);
  std::vector<u64> hat_inv(limbs);
  for (std::size_t i = 0; i < limbs; ++i) {
    const PrimeModulus& m = ctx.modulus(i);
    hat[i] = big_q / mpz_class(std::to_string(m.q));
    const mpz_class r = hat[i] % mpz_class(std::to_string(m.q));
    hat_inv[i] = mod_inv(std::stoull(r.get_str()), m);
  }
  std::vector<double> out(ctx.n());
  mpz_class acc, term;
  for (std::size_t x = 0; x < ctx.n(); ++x) {
    acc = 0;
    for (std::size_t i = 0; i < limbs; ++i) {
      const u64 v = mod_mul(c.limbs[i].coeffs[x], hat_inv[i], ctx.modulus(i));
      mpz_set_ui(term.get_mpz_t(), static_cast<unsigned long>(v));
      acc += term * hat[i];
    }
    acc %= big_q;
    if (acc > half) acc -= big_q;
    out[x] = acc.get_d();
  }
  return out;
}

}  // namespace chipfhe
