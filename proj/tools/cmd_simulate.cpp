// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "chipfhe/analytic.hpp"
#include "chipfhe/chipletsim.hpp"
#include "chipfhe/ckks.hpp"
#include "cli.hpp"
#include "spec.hpp"

namespace chipfhe::cli {

namespace {

using nlohmann::json;
namespace an = analytic;

struct SimulateOptions {
  std::string spec;
  std::string out;
  std::string timeline;
  bool cross_check = false;
  bool dump_census = false;
  std::uint64_t seed = 0;
  int r = 0;
};

struct CrossCheck {
  int failures = 0;

  void expect(const std::string& name, const std::string& sim, const std::string& analytic) {
    const bool ok = sim == analytic;
    if (!ok) ++failures;
    std::printf("cross-check %-28s sim %-12s analytic %-12s %s\n", name.c_str(), sim.c_str(), analytic.c_str(),
                ok ? "ok" : "DIVERGED");
  }
  void expect_phase(const std::string& name, const sim::PhaseCensus& s, const an::PhaseCounts& a) {
    expect(name + ".intt", std::to_string(s.intt), std::to_string(a.intt));
    expect(name + ".ntt", std::to_string(s.ntt), std::to_string(a.ntt));
    expect(name + ".mas", std::to_string(s.mas), std::to_string(a.mas));
    expect(name + ".bconv", std::to_string(s.bconv), std::to_string(a.bconv));
  }
};

bool is_strawman(sim::Strategy s) {
  return s == sim::Strategy::strawman_a || s == sim::Strategy::strawman_b || s == sim::Strategy::strawman_c;
}

an::KeySwitchCensus keyswitch_census(int l, int k) {
  return k == 1 ? an::keyswitch_census_full(l) : an::keyswitch_census_generic(l, k);
}

// Measured census of one functional KeySwitch at N = 2^10 with the experiment's (L, dnum).
Census functional_census(const ExperimentSpec& spec, int l) {
  const CkksContext ctx(make_basis(1024, spec.l_max, spec.dnum, 40, 40));
  const std::uint64_t seed = spec.seed;
  auto [sk, keys] = keygen(ctx, seed);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<std::complex<double>> v(ctx.n() / 2);
  for (auto& z : v) z = {d(rng), d(rng)};
  const double delta = std::ldexp(1.0, 30);
  const Ciphertext c = encrypt(ctx, sk, encode(ctx, v, delta, l), delta, seed + 2);
  Census census;
  relinearize(ctx, mult(ctx, c, c), keys, &census);
  return census;
}

void cross_check(const ExperimentSpec& spec, const sim::CycleReport& rep, CrossCheck& cc) {
  const sim::ChipletConfig cfg = effective_config(spec);
  const auto& ops = spec.program.ops;
  const int k = spec.program.k();
  const bool single_ks = ops.size() == 1 && ops[0].kind == sim::MacroKind::KEYSWITCH;

  const int bound = an::chiplet_bound(spec.l_max, cfg.hbm_gbps * cfg.hbm_stacks / cfg.c2c_gbps);
  if (!is_strawman(spec.strategy))
    cc.expect("chiplet_bound_warning", rep.warnings.empty() ? "no" : "yes", cfg.r > bound ? "yes" : "no");

  if (single_ks) {
    const int l = ops[0].l;
    if (is_strawman(spec.strategy) || (spec.strategy == sim::Strategy::ring && k == 1)) {
      const an::Technique t = spec.strategy == sim::Strategy::strawman_a   ? an::Technique::A
                              : spec.strategy == sim::Strategy::strawman_b ? an::Technique::B
                              : spec.strategy == sim::Strategy::strawman_c ? an::Technique::C
                                                                           : an::Technique::OURS;
      cc.expect("comm_polynomials", std::to_string(rep.polynomials_transferred),
                an::comm_polynomials(t, l, spec.dnum, k, cfg.r).str());
    }
    if (k > 1 && !is_strawman(spec.strategy) && (l + 1) % k == 0)
      cc.expect("digit_flow_census", rep.census_ntt_equivalent.str(),
                an::digit_flow_census(l, (l + 1) / k, k, cfg.r).str());
  }

  if (is_strawman(spec.strategy)) return;
  an::KeySwitchCensus want;
  bool has_ks = false, has_moddown = false;
  for (const auto& op : ops) {
    if (op.kind == sim::MacroKind::MODDOWN || op.kind == sim::MacroKind::MODDOWN_RESCALE) has_moddown = true;
    if (op.kind != sim::MacroKind::KEYSWITCH && op.kind != sim::MacroKind::ROTATE) continue;
    has_ks = true;
    const auto c = keyswitch_census(op.l, k);
    for (auto [dst, src] : {std::pair{&want.modup, &c.modup}, {&want.keymul, &c.keymul}, {&want.moddown, &c.moddown}}) {
      dst->intt += src->intt;
      dst->ntt += src->ntt;
      dst->mas += src->mas;
      dst->bconv += src->bconv;
    }
  }
  if (!has_ks) return;
  cc.expect_phase("census.modup", rep.modup, want.modup);
  cc.expect_phase("census.keymul", rep.keymul, want.keymul);
  if (!has_moddown) cc.expect_phase("census.moddown", rep.moddown, want.moddown);

  const auto first = std::find_if(ops.begin(), ops.end(), [](const sim::MacroOp& o) {
    return o.kind == sim::MacroKind::KEYSWITCH || o.kind == sim::MacroKind::ROTATE;
  });
  const int l = first->l;
  Census f = functional_census(spec, l);
  const auto a = keyswitch_census(l, k);
  auto as_phase = [](const OpCounts& c) { return sim::PhaseCensus{c.intt, c.ntt, c.mas, c.bconv, c.aut}; };
  cc.expect_phase("functional.modup", as_phase(f["modup"]), a.modup);
  cc.expect_phase("functional.keymul", as_phase(f["keymul"]), a.keymul);
  cc.expect_phase("functional.moddown", as_phase(f["moddown"]), a.moddown);
}

void print_summary(const ExperimentSpec& spec, const sim::CycleReport& rep) {
  std::printf("%-16s %s\n", "spec", spec.name.empty() ? "-" : spec.name.c_str());
  std::printf("%-16s %d\n", "chiplets", effective_config(spec).r);
  std::printf("%-16s %llu\n", "cycles", static_cast<unsigned long long>(rep.total_cycles));
  std::printf("%-16s %.4f ms\n", "wall time", rep.wall_ms);
  std::printf("%-16s %.4f\n", "ntt utilization", rep.ntt_utilization);
  std::printf("%-16s %.4f\n", "comm overhead", rep.comm_overhead);
  std::printf("%-16s %llu\n", "transfers", static_cast<unsigned long long>(rep.polynomials_transferred));
  std::printf("%-16s %llu\n", "c2c bytes", static_cast<unsigned long long>(rep.link_bytes));
  for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
}

int run_simulate(const SimulateOptions& o) {
  ExperimentSpec spec = load_spec(o.spec);
  if (o.seed) spec.seed = o.seed;
  if (o.r > 0) spec.config.r = o.r;
  const std::string out = o.out.empty() ? spec.report_path : o.out;
  const std::string timeline = o.timeline.empty() ? spec.timeline_path : o.timeline;

  sim::Dag dag;
  std::vector<sim::Timing> t;
  const sim::CycleReport rep = run_spec(spec, &dag, &t);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw ConfigError("out: cannot write '" + out + "'");
    f << sim::report_to_json(rep) << '\n';
  }
  if (!timeline.empty()) {
    std::ofstream f(timeline);
    if (!f) throw ConfigError("timeline: cannot write '" + timeline + "'");
    sim::write_timeline_csv(f, dag, t);
  }
  print_summary(spec, rep);
  if (o.dump_census) std::cout << json::parse(sim::report_to_json(rep))["census"].dump(2) << '\n';
  if (!o.cross_check) return 0;
  CrossCheck cc;
  cross_check(spec, rep, cc);
  if (cc.failures) {
    std::cerr << "simulate: " << cc.failures << " cross-check divergence(s)\n";
    return 1;
  }
  return 0;
}

struct SweepOptions {
  std::string spec;
  std::vector<int> r_list{1, 2, 4, 8, 12, 16};
  std::string out;
};

int run_sweep(const SweepOptions& o) {
  const ExperimentSpec base = load_spec(o.spec);
  int limbs = 0;
  for (const auto& op : base.program.ops) limbs += op.l + 1;
  std::vector<sim::CycleReport> reps(o.r_list.size());
  const int count = static_cast<int>(o.r_list.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    ExperimentSpec s = base;
    s.config.r = o.r_list[i];
    reps[i] = run_spec(s);
  }
  std::ostringstream csv;
  csv << "r,cycles,wall_ms,amortized_ns,ntt_utilization,comm_overhead\n";
  for (int i = 0; i < count; ++i) {
    const auto& r = reps[i];
    char line[160];
    std::snprintf(line, sizeof line, "%d,%llu,%.6f,%.3f,%.4f,%.4f\n", o.r_list[i],
                  static_cast<unsigned long long>(r.total_cycles), r.wall_ms, r.wall_ms * 1e6 / limbs,
                  r.ntt_utilization, r.comm_overhead);
    csv << line;
  }
  std::cout << csv.str();
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw ConfigError("out: cannot write '" + o.out + "'");
    f << csv.str();
  }
  return 0;
}

}  // namespace

void add_simulate(CLI::App& app, int& rc) {
  auto opts = std::make_shared<SimulateOptions>();
  auto* cmd = app.add_subcommand("simulate", "Run an experiment spec through the chiplet simulator");
  cmd->add_option("--spec", opts->spec, "experiment spec JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", opts->out, "report JSON path");
  cmd->add_option("--timeline", opts->timeline, "timeline CSV path");
  cmd->add_option("--seed", opts->seed, "override the experiment seed");
  cmd->add_option("--r", opts->r, "override the chiplet count");
  cmd->add_flag("--cross-check", opts->cross_check, "compare against analytic and functional counts");
  cmd->add_flag("--dump-census", opts->dump_census, "print the per-phase census");
  cmd->callback([opts, &rc] { rc = run_simulate(*opts); });
}

void add_sweep(CLI::App& app, int& rc) {
  auto opts = std::make_shared<SweepOptions>();
  auto* cmd = app.add_subcommand("sweep", "Run a spec over several chiplet counts");
  cmd->add_option("--spec", opts->spec, "experiment spec JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--r", opts->r_list, "chiplet counts")->delimiter(',')->capture_default_str();
  cmd->add_option("--out", opts->out, "CSV path");
  cmd->callback([opts, &rc] { rc = run_sweep(*opts); });
}

}  // namespace chipfhe::cli
