// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

// Serial reference NTT per limb against the OpenMP limb-parallel to_ntt.

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <random>

#include "chipfhe/ckks.hpp"

using namespace chipfhe;

namespace {

template <class F>
double best_ms(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"limb-parallel NTT benchmark"};
  int log_n = 14, l_max = 15, reps = 5;
  std::uint64_t seed = 1;
  app.add_option("--log-n", log_n, "log2 of the ring degree")->capture_default_str();
  app.add_option("--L", l_max, "maximum level")->capture_default_str();
  app.add_option("--reps", reps, "repetitions, best is reported")->capture_default_str();
  app.add_option("--seed", seed, "input seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const CkksContext ctx(make_basis(std::uint64_t{1} << log_n, l_max, l_max + 1, 50, 50));
  std::mt19937_64 rng(seed);
  RnsPoly input(ctx, l_max, true, Domain::coeff);
  for (Poly& limb : input.limbs)
    for (auto& c : limb.coeffs) c = rng() % ctx.modulus(limb.modulus_id).q;

  RnsPoly serial, parallel;
  const double t_serial = best_ms(reps, [&] {
    serial = input;
    for (Poly& limb : serial.limbs) limb = ntt_reference(limb, ctx.table(limb.modulus_id));
  });
  const double t_parallel = best_ms(reps, [&] {
    parallel = input;
    to_ntt(ctx, parallel);
  });

  std::printf("N=2^%d limbs=%zu threads=%d\n", log_n, input.limbs.size(), omp_get_max_threads());
  std::printf("%-10s %10.3f ms\n", "serial", t_serial);
  std::printf("%-10s %10.3f ms\n", "openmp", t_parallel);
  std::printf("%-10s %10.2fx\n", "speedup", t_serial / t_parallel);
  if (!(serial == parallel)) {
    std::fprintf(stderr, "mismatch between serial and parallel transforms\n");
    return 1;
  }
  return 0;
}
