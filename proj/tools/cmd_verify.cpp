// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <json.hpp>
#include <random>
#include <string>

#include "chipfhe/analytic.hpp"
#include "chipfhe/ckks.hpp"
#include "chipfhe/polykernel.hpp"
#include "chipfhe/trivium.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace chipfhe::cli {

namespace {

using nlohmann::json;
using cvec = std::vector<std::complex<double>>;

struct VerifyOptions {
  std::string scope = "all";
  std::string size = "toy";
  std::string mutate = "none";
  std::uint64_t seed = 1;
};

struct Mismatch {
  std::string where;
};

class Runner {
 public:
  explicit Runner(std::uint64_t seed) : rng_(seed) {}

  void begin(const std::string& suite) {
    suites_.push_back({{"name", suite}, {"comparisons", 0}});
    current_ = suite;
  }
  void check(bool ok, const std::string& what) {
    ++total_;
    suites_.back()["comparisons"] = suites_.back()["comparisons"].get<std::uint64_t>() + 1;
    if (!ok) throw Mismatch{current_ + ": " + what};
  }
  Poly random_poly(std::size_t n, u64 q) {
    Poly p(n, 0);
    for (auto& c : p.coeffs) c = rng_() % q;
    return p;
  }
  cvec random_slots(std::size_t count) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    cvec v(count);
    for (auto& z : v) z = {d(rng_), d(rng_)};
    return v;
  }
  std::uint64_t next() { return rng_(); }
  std::uint64_t total() const { return total_; }
  const json& suites() const { return suites_; }

 private:
  std::mt19937_64 rng_;
  json suites_ = json::array();
  std::string current_;
  std::uint64_t total_ = 0;
};

void ntt_suite(Runner& run, bool small) {
  const std::vector<std::size_t> sizes = small ? std::vector<std::size_t>{256, 1024, 4096}
                                               : std::vector<std::size_t>{256, 1024};
  const int trials = small ? 100 : 20;
  run.begin("ntt_hybrid");
  for (std::size_t n : sizes) {
    const PrimeModulus m = find_ntt_prime(54, 2 * n);
    const TwiddleTable t(m);
    for (std::size_t n2 = 1; n2 <= 64 && n2 <= n; n2 *= 2) {
      const NttPlan plan{n / n2, n2};
      for (int i = 0; i < trials; ++i) {
        const Poly p = run.random_poly(n, m.q);
        const Poly f = ntt_reference(p, t);
        run.check(ntt_hybrid(p, t, plan) == f,
                  "N=" + std::to_string(n) + " split " + std::to_string(plan.n1) + "x" + std::to_string(n2));
        run.check(intt_reference(f, t) == p, "roundtrip N=" + std::to_string(n));
      }
    }
  }
  run.begin("negacyclic_product");
  const std::size_t n = 256;
  const PrimeModulus m = find_ntt_prime(54, 2 * n);
  const TwiddleTable t(m);
  for (int i = 0; i < (small ? 10 : 3); ++i) {
    const Poly a = run.random_poly(n, m.q), b = run.random_poly(n, m.q);
    const Poly fa = ntt_reference(a, t), fb = ntt_reference(b, t);
    const Poly prod = intt_reference(mas(MasOp::mul, fa, fb, nullptr, m), t);
    run.check(prod.coeffs == oracle::negacyclic_mul(a.coeffs, b.coeffs, m.q), "schoolbook N=256");
  }
}

void automorphism_suite(Runner& run, bool small, ShuffleFault fault) {
  run.begin("automorphism");
  const std::size_t n = 256;
  const PrimeModulus m = find_ntt_prime(40, 2 * n);
  const Poly p = run.random_poly(n, m.q);
  for (std::size_t n2 : {2u, 16u, 64u}) {
    const NttPlan plan{n / n2, n2};
    for (u64 gle = 1; gle < 2 * n; gle += 2)
      run.check(automorphism_shuffle(p, gle, plan, m, nullptr, fault) == automorphism_oracle(p, gle, m),
                "N=256 gle=" + std::to_string(gle) + " N2=" + std::to_string(n2));
  }
  const std::size_t big = small ? 4096 : 1024;
  const PrimeModulus mb = find_ntt_prime(40, 2 * big);
  const Poly pb = run.random_poly(big, mb.q);
  for (int i = 0; i < 50; ++i) {
    const u64 gle = 2 * (run.next() % big) + 1;
    run.check(automorphism_shuffle(pb, gle, NttPlan{big / 64, 64}, mb, nullptr, fault) ==
                  automorphism_oracle(pb, gle, mb),
              "N=" + std::to_string(big) + " gle=" + std::to_string(gle));
  }
  for (int i = 0; i < 50; ++i) {
    const u64 g1 = 2 * (run.next() % n) + 1, g2 = 2 * (run.next() % n) + 1;
    run.check(automorphism_oracle(automorphism_oracle(p, g2, m), g1, m) ==
                  automorphism_oracle(p, (g1 * g2) % (2 * n), m),
              "composition");
  }
}

void trivium_suite(Runner& run, bool small) {
  run.begin("trivium");
  const std::size_t words = small ? 10000 : 1000;
  for (int s = 0; s < 10; ++s) {
    const std::uint64_t seed = run.next();
    const auto fast = trivium_stream(seed, words);
    oracle::TriviumBitSerial ref(seed);
    for (std::size_t i = 0; i < words; ++i) run.check(fast[i] == ref.next_word(), "word " + std::to_string(i));
  }
}

void mas_suite(Runner& run) {
  run.begin("mas");
  const PrimeModulus m = find_ntt_prime(54, 2048);
  const Poly a = run.random_poly(1024, m.q), b = run.random_poly(1024, m.q), c = run.random_poly(1024, m.q);
  const Poly mac = mas(MasOp::mac, a, b, &c, m);
  for (std::size_t i = 0; i < a.size(); ++i)
    run.check(mac.coeffs[i] == (oracle::mulmod(a.coeffs[i], b.coeffs[i], m.q) + c.coeffs[i]) % m.q,
              "mac coefficient " + std::to_string(i));
}

double rel_error(const cvec& got, const cvec& want) {
  double e = 0, s = 0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    e = std::max(e, std::abs(got[i] - want[i]));
    s = std::max(s, std::abs(want[i]));
  }
  return e / s;
}

void ckks_suite(Runner& run, bool small) {
  run.begin("ckks");
  const double delta = std::ldexp(1.0, 39);
  const CkksContext ctx(make_basis(small ? 8192 : 4096, 8, 3, 40, 40));
  auto [sk, keys] = keygen(ctx, run.next(), {1});
  const std::size_t slots = ctx.n() / 2;
  const int l = ctx.l_max();
  const cvec a = run.random_slots(slots), b = run.random_slots(slots);
  const Ciphertext ca = encrypt(ctx, sk, encode(ctx, a, delta, l), delta, run.next());
  const Ciphertext cb = encrypt(ctx, sk, encode(ctx, b, delta, l), delta, run.next());
  const Ciphertext r = rescale(ctx, relinearize(ctx, mult(ctx, ca, cb), keys));
  cvec prod(slots);
  for (std::size_t i = 0; i < slots; ++i) prod[i] = a[i] * b[i];
  run.check(rel_error(decode(ctx, decrypt(ctx, sk, r), r.scale), prod) < 1e-4, "mult-relin-rescale");
  const Ciphertext rot = rotate(ctx, ca, 1, keys);
  cvec shifted(slots);
  for (std::size_t i = 0; i < slots; ++i) shifted[i] = a[(i + 1) % slots];
  run.check(rel_error(decode(ctx, decrypt(ctx, sk, rot), rot.scale), shifted) < 1e-4, "rotate by 1");

  const CkksContext full(make_basis(1024, 4, 5, 40, 40));
  auto [sk1, k1] = keygen(full, run.next());
  const cvec x = run.random_slots(512);
  const Ciphertext cx = encrypt(full, sk1, encode(full, x, delta, 4), delta, run.next());
  const ExtCiphertext d = mult(full, cx, cx);
  Census ca_census, cb_census;
  const Ciphertext g = keyswitch_generic(full, d, k1.relin, 5, &cb_census);
  const Ciphertext f = keyswitch_full_dnum(full, d, k1.relin, &ca_census);
  run.check(g.c0 == f.c0 && g.c1 == f.c1, "generic dnum=L+1 equals full dnum");
  const auto want = analytic::keyswitch_census_full(4);
  run.check(ca_census["modup"].ntt == want.modup.ntt && ca_census["keymul"].mas == want.keymul.mas &&
                ca_census["moddown"].ntt == want.moddown.ntt,
            "census vs closed form");
}

int run_verify(const VerifyOptions& o) {
  if (o.scope != "kernels" && o.scope != "ckks" && o.scope != "all")
    throw ConfigError("scope: expected kernels, ckks or all");
  if (o.size != "toy" && o.size != "small") throw ConfigError("size: expected toy or small");
  ShuffleFault fault = ShuffleFault::none;
  if (o.mutate == "shuffle-address") fault = ShuffleFault::address_off_by_one;
  else if (o.mutate != "none") throw ConfigError("mutate: expected none or shuffle-address");

  const bool small = o.size == "small";
  Runner run(o.seed);
  std::string failure;
  try {
    if (o.scope != "ckks") {
      ntt_suite(run, small);
      automorphism_suite(run, small, fault);
      trivium_suite(run, small);
      mas_suite(run);
    }
    if (o.scope != "kernels") ckks_suite(run, small);
  } catch (const Mismatch& m) {
    failure = m.where;
  }
  json summary = {{"schema", 1},         {"scope", o.scope},         {"size", o.size},
                  {"seed", o.seed},      {"mutate", o.mutate},       {"suites", run.suites()},
                  {"comparisons", run.total()}, {"passed", failure.empty()}};
  if (!failure.empty()) summary["first_failure"] = failure;
  std::cout << summary.dump(2) << '\n';
  if (!failure.empty()) {
    std::cerr << "verify: mismatch in " << failure << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

void add_verify(CLI::App& app, int& rc) {
  auto opts = std::make_shared<VerifyOptions>();
  auto* cmd = app.add_subcommand("verify", "Run the oracle-differential suites");
  cmd->add_option("--scope", opts->scope, "kernels, ckks or all")->capture_default_str();
  cmd->add_option("--size", opts->size, "toy or small")->capture_default_str();
  cmd->add_option("--seed", opts->seed, "RNG seed")->capture_default_str();
  cmd->add_option("--mutate", opts->mutate, "fault injection: none or shuffle-address")->capture_default_str();
  cmd->callback([opts, &rc] { rc = run_verify(*opts); });
}

}  // namespace chipfhe::cli
