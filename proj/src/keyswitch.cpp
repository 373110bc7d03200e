// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "ckks_internal.hpp"

namespace chipfhe {

namespace detail {

BaseConverter::BaseConverter(const CkksContext& ctx, std::vector<std::uint32_t> src, std::vector<std::uint32_t> tgt)
    : ctx_(ctx), src_(std::move(src)), tgt_(std::move(tgt)) {
  const std::size_t ns = src_.size();
  hat_inv_.resize(ns);
  hat_.assign(ns, std::vector<u64>(tgt_.size()));
  auto hat_mod = [&](std::size_t i, const PrimeModulus& m) {
    u64 h = 1 % m.q;
    for (std::size_t j = 0; j < ns; ++j)
      if (j != i) h = mod_mul(h, reduce_to(ctx_.modulus(src_[j]).q, m), m);
    return h;
  };
  for (std::size_t i = 0; i < ns; ++i) {
    const PrimeModulus& mi = ctx_.modulus(src_[i]);
    hat_inv_[i] = mod_inv(hat_mod(i, mi), mi);
    for (std::size_t t = 0; t < tgt_.size(); ++t) hat_[i][t] = hat_mod(i, ctx_.modulus(tgt_[t]));
  }
}

std::vector<Poly> BaseConverter::apply(const std::vector<const Poly*>& in) const {
  const std::size_t n = ctx_.n();
  const std::size_t ns = src_.size();
  std::vector<Poly> pre(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const PrimeModulus& mi = ctx_.modulus(src_[i]);
    pre[i] = Poly(n, src_[i]);
    for (std::size_t x = 0; x < n; ++x) pre[i].coeffs[x] = mod_mul(in[i]->coeffs[x], hat_inv_[i], mi);
  }
  std::vector<Poly> out(tgt_.size());
  const auto nt = static_cast<std::int64_t>(tgt_.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < nt; ++t) {
    const PrimeModulus& mt = ctx_.modulus(tgt_[t]);
    Poly r(n, tgt_[t]);
    for (std::size_t i = 0; i < ns; ++i) {
      const u64 h = hat_[i][t];
      for (std::size_t x = 0; x < n; ++x)
        r.coeffs[x] = mod_add(r.coeffs[x], mod_mul(reduce_to(pre[i].coeffs[x], mt), h, mt), mt);
    }
    out[t] = std::move(r);
  }
  return out;
}

std::vector<Poly> convert_limbs(const CkksContext& ctx, const std::vector<const Poly*>& sources,
                                const std::vector<std::uint32_t>& targets) {
  std::vector<Poly> out;
  if (sources.size() == 1) {
    out.resize(targets.size());
    const Poly& s = *sources.front();
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const PrimeModulus& m = ctx.modulus(targets[t]);
      out[t] = Poly(ctx.n(), targets[t]);
      for (std::size_t x = 0; x < ctx.n(); ++x) out[t].coeffs[x] = reduce_to(s.coeffs[x], m);
    }
  } else {
    std::vector<std::uint32_t> src;
    for (const Poly* p : sources) src.push_back(p->modulus_id);
    out = BaseConverter(ctx, src, targets).apply(sources);
  }
  const auto nt = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < nt; ++t) {
    ntt_inplace(out[t].coeffs.data(), ctx.table(out[t].modulus_id));
    out[t].domain = Domain::ntt;
  }
  return out;
}

}  // namespace detail

namespace {

using detail::reduce_to;

void require_ntt(const RnsPoly& p, const char* what) {
  for (const Poly& l : p.limbs)
    if (l.domain != Domain::ntt) throw DomainMismatch(std::string(what) + " must be in NTT domain");
}

Poly intt_copy(const CkksContext& ctx, const Poly& p) {
  Poly c = p;
  intt_inplace(c.coeffs.data(), ctx.table(c.modulus_id));
  c.domain = Domain::coeff;
  return c;
}

/// Key limbs are laid out q_0..q_L, p_0..p_{K-1}, so a global id is its position.
std::size_t key_limb(std::uint32_t id) { return id; }

void check_key(const CkksContext& ctx, const ExtCiphertext& d, const KeySwitchKey& ksk) {
  if (ksk.digits.empty() || ksk.l_max < d.level || ksk.l_max != ctx.l_max() ||
      ksk.digits.front().ksk0.limbs.size() != ctx.basis().total_moduli())
    throw KeyLevelTooLow("key does not cover level " + std::to_string(d.level));
  require_ntt(d.d2, "d2");
}

/// acc[t] += ext[t] * ksk{0,1}[t] for every target of the extended level-l basis.
void key_mac(const CkksContext& ctx, const std::vector<const Poly*>& ext, const KskDigit& digit, RnsPoly& acc0,
             RnsPoly& acc1) {
  const auto nt = static_cast<std::int64_t>(ext.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < nt; ++t) {
    const Poly& e = *ext[t];
    const PrimeModulus& m = ctx.modulus(e.modulus_id);
    const std::size_t u = key_limb(e.modulus_id);
    const Poly& k0 = digit.ksk0.limbs[u];
    const Poly k1 = ksk1_limb(ctx, digit, u);
    auto& a0 = acc0.limbs[t].coeffs;
    auto& a1 = acc1.limbs[t].coeffs;
    for (std::size_t x = 0; x < e.size(); ++x) {
      a0[x] = mod_add(a0[x], mod_mul(e.coeffs[x], k0.coeffs[x], m), m);
      a1[x] = mod_add(a1[x], mod_mul(e.coeffs[x], k1.coeffs[x], m), m);
    }
  }
}

std::vector<std::uint32_t> extended_ids(const CkksContext& ctx, int level) {
  std::vector<std::uint32_t> ids;
  for (int i = 0; i <= level; ++i) ids.push_back(static_cast<std::uint32_t>(i));
  for (std::size_t k = 0; k < ctx.p_count(); ++k) ids.push_back(static_cast<std::uint32_t>(ctx.basis().p_id(k)));
  return ids;
}

Ciphertext finish(const CkksContext& ctx, const ExtCiphertext& d, const RnsPoly& acc0, const RnsPoly& acc1,
                  Census* census) {
  Ciphertext out;
  out.level = d.level;
  out.scale = d.scale;
  out.c0 = moddown(ctx, acc0, census);
  out.c1 = moddown(ctx, acc1, census);
  const auto nl = static_cast<std::int64_t>(d.level + 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nl; ++i) {
    const PrimeModulus& m = ctx.modulus(static_cast<std::size_t>(i));
    for (std::size_t x = 0; x < ctx.n(); ++x) {
      out.c0.limbs[i].coeffs[x] = mod_add(out.c0.limbs[i].coeffs[x], d.d0.limbs[i].coeffs[x], m);
      out.c1.limbs[i].coeffs[x] = mod_add(out.c1.limbs[i].coeffs[x], d.d1.limbs[i].coeffs[x], m);
    }
  }
  if (census) (*census)["moddown"].mas += 2 * static_cast<u64>(d.level + 1);
  return out;
}

}  // namespace

Ciphertext keyswitch_full_dnum(const CkksContext& ctx, const ExtCiphertext& d, const KeySwitchKey& ksk,
                               Census* census) {
  if (ksk.k != 1 || ctx.p_count() != 1) throw ConfigError("keyswitch_full_dnum needs dnum = L+1 (K = 1)");
  check_key(ctx, d, ksk);
  const int l = d.level;
  const auto ids = extended_ids(ctx, l);
  RnsPoly acc0(ctx, l, true, Domain::ntt), acc1(ctx, l, true, Domain::ntt);
  for (int i = 0; i <= l; ++i) {
    const Poly r = intt_copy(ctx, d.d2.limbs[i]);
    const auto ext = detail::convert_limbs(ctx, {&r}, ids);
    std::vector<const Poly*> ptrs;
    for (const Poly& p : ext) ptrs.push_back(&p);
    key_mac(ctx, ptrs, ksk.digits[i], acc0, acc1);
  }
  if (census) {
    const u64 n = static_cast<u64>(l + 1);
    (*census)["modup"].intt += n;
    (*census)["modup"].ntt += n * (n + 1);
    (*census)["keymul"].mas += 2 * n * (n + 1);
  }
  return finish(ctx, d, acc0, acc1, census);
}

Ciphertext keyswitch_generic(const CkksContext& ctx, const ExtCiphertext& d, const KeySwitchKey& ksk, int dnum,
                             Census* census) {
  if (dnum != ksk.dnum) throw ConfigError("dnum does not match the key");
  check_key(ctx, d, ksk);
  const int l = d.level;
  const int k = ksk.k;
  if (static_cast<long>(dnum) * k < l + 1) throw ConfigError("dnum * K < l + 1");
  const auto ids = extended_ids(ctx, l);
  RnsPoly acc0(ctx, l, true, Domain::ntt), acc1(ctx, l, true, Domain::ntt);
  for (int beta = 0; beta * k <= l; ++beta) {
    const int lo = beta * k;
    const int hi = std::min(lo + k, l + 1);
    std::vector<Poly> src;
    for (int i = lo; i < hi; ++i) src.push_back(intt_copy(ctx, d.d2.limbs[i]));
    std::vector<const Poly*> src_ptrs;
    for (const Poly& p : src) src_ptrs.push_back(&p);
    std::vector<std::uint32_t> targets;
    for (std::uint32_t id : ids)
      if (id < static_cast<std::uint32_t>(lo) || id >= static_cast<std::uint32_t>(hi)) targets.push_back(id);
    const auto conv = detail::convert_limbs(ctx, src_ptrs, targets);
    std::vector<const Poly*> ext;
    std::size_t c = 0;
    for (std::uint32_t id : ids) {
      const bool own = id >= static_cast<std::uint32_t>(lo) && id < static_cast<std::uint32_t>(hi);
      ext.push_back(own ? &d.d2.limbs[id] : &conv[c++]);
    }
    key_mac(ctx, ext, ksk.digits[beta], acc0, acc1);
    if (census) {
      const u64 kb = static_cast<u64>(hi - lo);
      (*census)["modup"].intt += kb;
      (*census)["modup"].ntt += targets.size();
      if (kb > 1) (*census)["modup"].bconv += kb * (1 + targets.size());
      (*census)["keymul"].mas += 2 * ids.size();
    }
  }
  return finish(ctx, d, acc0, acc1, census);
}

RnsPoly bconv_routine(const CkksContext& ctx, const RnsPoly& y, const std::vector<std::uint32_t>& targets,
                      Census* census) {
  require_ntt(y, "bconv input");
  std::vector<Poly> src;
  for (const Poly& p : y.limbs) src.push_back(intt_copy(ctx, p));
  std::vector<const Poly*> ptrs;
  for (const Poly& p : src) ptrs.push_back(&p);
  RnsPoly out;
  out.level = y.level;
  out.limbs = detail::convert_limbs(ctx, ptrs, targets);
  if (census) {
    auto& c = (*census)["bconv"];
    c.intt += src.size();
    c.ntt += targets.size();
    if (src.size() > 1) c.bconv += src.size() * (1 + targets.size());
  }
  return out;
}

RnsPoly moddown(const CkksContext& ctx, const RnsPoly& d, Census* census) {
  require_ntt(d, "moddown input");
  const int l = d.level;
  const std::size_t kp = ctx.p_count();
  if (d.limbs.size() != static_cast<std::size_t>(l) + 1 + kp) throw DomainError("moddown needs the special limbs");
  std::vector<Poly> src;
  for (std::size_t k = 0; k < kp; ++k) src.push_back(intt_copy(ctx, d.limbs[l + 1 + k]));
  std::vector<const Poly*> ptrs;
  for (const Poly& p : src) ptrs.push_back(&p);
  std::vector<std::uint32_t> targets;
  for (int i = 0; i <= l; ++i) targets.push_back(static_cast<std::uint32_t>(i));
  const auto conv = detail::convert_limbs(ctx, ptrs, targets);
  RnsPoly out(ctx, l, false, Domain::ntt);
  const auto nl = static_cast<std::int64_t>(l + 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < nl; ++i) {
    const PrimeModulus& m = ctx.modulus(static_cast<std::size_t>(i));
    const u64 pinv = ctx.p_inv_mod_q(static_cast<std::size_t>(i));
    for (std::size_t x = 0; x < ctx.n(); ++x)
      out.limbs[i].coeffs[x] = mod_mul(mod_sub(d.limbs[i].coeffs[x], conv[i].coeffs[x], m), pinv, m);
  }
  if (census) {
    auto& c = (*census)["moddown"];
    c.intt += kp;
    c.ntt += targets.size();
    c.mas += targets.size();
    if (kp > 1) c.bconv += kp * (1 + targets.size());
  }
  return out;
}

Ciphertext rescale(const CkksContext& ctx, const Ciphertext& c, Census* census) {
  const int l = c.level;
  if (l < 1) throw LevelExhausted("cannot rescale at level 0");
  const PrimeModulus& ql = ctx.modulus(static_cast<std::size_t>(l));
  Ciphertext out;
  out.level = l - 1;
  out.scale = c.scale / static_cast<double>(ql.q);
  auto drop = [&](const RnsPoly& p) {
    require_ntt(p, "rescale input");
    const Poly t = intt_copy(ctx, p.limbs[l]);
    RnsPoly r(ctx, l - 1, false, Domain::ntt);
    const auto nl = static_cast<std::int64_t>(l);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < nl; ++i) {
      const PrimeModulus& m = ctx.modulus(static_cast<std::size_t>(i));
      const u64 qinv = mod_inv(reduce_to(ql.q, m), m);
      auto& dst = r.limbs[i].coeffs;
      for (std::size_t x = 0; x < ctx.n(); ++x) dst[x] = reduce_to(t.coeffs[x], m);
      ntt_inplace(dst.data(), ctx.table(static_cast<std::size_t>(i)));
      for (std::size_t x = 0; x < ctx.n(); ++x) dst[x] = mod_mul(mod_sub(p.limbs[i].coeffs[x], dst[x], m), qinv, m);
    }
    return r;
  };
  out.c0 = drop(c.c0);
  out.c1 = drop(c.c1);
  if (census) {
    auto& cc = (*census)["rescale"];
    cc.intt += 2;
    cc.ntt += 2 * static_cast<u64>(l);
    cc.mas += 2 * static_cast<u64>(l);
  }
  return out;
}

Ciphertext relinearize(const CkksContext& ctx, const ExtCiphertext& d, const KeySet& keys, Census* census) {
  if (keys.relin.k == 1) return keyswitch_full_dnum(ctx, d, keys.relin, census);
  return keyswitch_generic(ctx, d, keys.relin, keys.relin.dnum, census);
}

Ciphertext rotate(const CkksContext& ctx, const Ciphertext& c, std::int64_t rot, const KeySet& keys, Census* census) {
  auto it = keys.rotation.find(rot);
  if (it == keys.rotation.end()) throw MissingRotationKey("no key for rotation " + std::to_string(rot));
  Ciphertext r = rotate_perm(ctx, c, rot, census);
  ExtCiphertext d;
  d.level = r.level;
  d.scale = r.scale;
  d.d0 = std::move(r.c0);
  d.d1 = RnsPoly(ctx, r.level, false, Domain::ntt);
  d.d2 = std::move(r.c1);
  const KeySwitchKey& k = it->second;
  if (k.k == 1) return keyswitch_full_dnum(ctx, d, k, census);
  return keyswitch_generic(ctx, d, k, k.dnum, census);
}

}  // namespace chipfhe
