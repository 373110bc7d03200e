// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chipfhe/analytic.hpp"
#include "cli.hpp"

namespace chipfhe::cli {

namespace {

namespace an = analytic;

struct AnalyzeOptions {
  std::string formula;
  std::string tech = "ours";
  int l = -1;
  int L = 30;
  int r = 4;
  int dnum = -1;
  int K = -1;
  double hbm = 1200.0;
  double c2c = 630.0;
  double u = 4.0;
  std::uint64_t n1 = 1024;
  std::uint64_t n2 = 64;
  double f = 1.5;
  int w = 54;
  bool naive = false;
  bool tfg = false;
  std::string sweep;
  bool csv = false;
};

struct Resolved {
  int l, L, r, dnum, K;
};

Resolved resolve(const AnalyzeOptions& o) {
  Resolved v{o.l, o.L, o.r, o.dnum, o.K};
  if (v.l < 0) v.l = v.L;
  if (v.dnum < 0) v.dnum = v.L + 1;
  if (v.dnum < 1 || v.dnum > v.L + 1) throw ConfigError("dnum: must be in [1, L+1]");
  if (v.K < 0) v.K = (v.L + v.dnum) / v.dnum;
  return v;
}

using Rows = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double x, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

Rows evaluate(const AnalyzeOptions& o) {
  const Resolved v = resolve(o);
  const std::string& f = o.formula;
  if (f == "comm") return {{"polynomials", an::comm_polynomials(an::parse_technique(o.tech), v.l, v.dnum, v.K, v.r).str()}};
  if (f == "bound") return {{"chiplets", std::to_string(an::chiplet_bound(v.L, o.hbm / o.c2c, o.u))}};
  if (f == "throughput") {
    an::FormulaInputs in;
    in.l = v.l;
    in.L = v.L;
    in.dnum = v.dnum;
    in.K = v.K;
    in.r = v.r;
    in.n1 = o.n1;
    in.n2 = o.n2;
    in.f = o.f * 1e9;
    return {{"ops_per_s", fmt(an::keyswitch_throughput(in, !o.naive), "%.1f")},
            {"cycles", std::to_string(an::keyswitch_cycles(v.L, o.n1, !o.naive))}};
  }
  if (f == "improvement") {
    const auto x = an::shadow_improvement(v.L);
    return {{"fraction", x.str()}, {"percent", fmt(100.0 * x.value(), "%.2f")}};
  }
  if (f == "storage") {
    const auto s = an::key_storage(v.L, v.dnum, o.n1 * o.n2, o.w);
    return {{"expanded_bytes", std::to_string(s.expanded)},
            {"seeded_bytes", std::to_string(s.seeded)},
            {"per_digit_limb_bytes", std::to_string(s.per_digit_limb)}};
  }
  if (f == "twiddle") {
    const auto t = an::twiddle_tradeoff(o.n1, o.n2, o.tfg);
    return {{"multipliers_total", std::to_string(t.multipliers_total)},
            {"multipliers_tfg", std::to_string(t.multipliers_tfg)},
            {"memory_words", std::to_string(t.memory_words)}};
  }
  if (f == "census") return {{"ntt_equivalent", an::digit_flow_census(v.l, v.dnum, v.K, v.r).str()}};
  throw ConfigError("formula: unknown '" + f + "'");
}

struct SweepRange {
  std::string name;
  int from = 0, to = 0, step = 1;
};

SweepRange parse_sweep(const std::string& s) {
  SweepRange r;
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ConfigError("sweep: expected name=from:to[:step]");
  r.name = s.substr(0, eq);
  std::istringstream in(s.substr(eq + 1));
  char c1 = 0, c2 = 0;
  in >> r.from >> c1 >> r.to;
  if (!in || c1 != ':') throw ConfigError("sweep: expected name=from:to[:step]");
  if (in >> c2 >> r.step; c2 && c2 != ':') throw ConfigError("sweep: expected name=from:to[:step]");
  if (r.step <= 0) throw ConfigError("sweep: step must be positive");
  return r;
}

int run_analyze(AnalyzeOptions o) {
  if (o.sweep.empty()) {
    const Rows rows = evaluate(o);
    if (o.csv) {
      std::cout << "formula,field,value\n";
      for (const auto& [k, v] : rows) std::cout << o.formula << ',' << k << ',' << v << '\n';
    } else if (rows.size() == 1) {
      std::cout << rows[0].second << '\n';
    } else {
      for (const auto& [k, v] : rows) std::cout << k << ' ' << v << '\n';
    }
    return 0;
  }
  const SweepRange range = parse_sweep(o.sweep);
  std::map<std::string, int*> params{{"l", &o.l}, {"L", &o.L}, {"r", &o.r}, {"dnum", &o.dnum}, {"K", &o.K}};
  const auto it = params.find(range.name);
  if (it == params.end()) throw ConfigError("sweep: parameter must be one of l, L, r, dnum, K");
  std::cout << "formula," << range.name << ",field,value\n";
  for (int x = range.from; x <= range.to; x += range.step) {
    *it->second = x;
    for (const auto& [k, v] : evaluate(o)) std::cout << o.formula << ',' << x << ',' << k << ',' << v << '\n';
  }
  return 0;
}

}  // namespace

void add_analyze(CLI::App& app, int& rc) {
  auto o = std::make_shared<AnalyzeOptions>();
  auto* cmd = app.add_subcommand("analyze", "Evaluate closed-form models");
  cmd->add_option("formula", o->formula, "comm, bound, throughput, improvement, storage, twiddle or census")
      ->required();
  cmd->add_option("--tech", o->tech, "technique for comm")->capture_default_str();
  cmd->add_option("--l", o->l, "current level (default L)");
  cmd->add_option("--L", o->L, "maximum level")->capture_default_str();
  cmd->add_option("--r", o->r, "chiplets")->capture_default_str();
  cmd->add_option("--dnum", o->dnum, "digits (default L+1)");
  cmd->add_option("--K", o->K, "limbs per digit (default ceil((L+1)/dnum))");
  cmd->add_option("--hbm", o->hbm, "HBM bandwidth, GB/s")->capture_default_str();
  cmd->add_option("--c2c", o->c2c, "chiplet link bandwidth, GB/s")->capture_default_str();
  cmd->add_option("--u", o->u, "NTT slowdown factor for the bound")->capture_default_str();
  cmd->add_option("--n1", o->n1, "NTT lanes")->capture_default_str();
  cmd->add_option("--n2", o->n2, "memories")->capture_default_str();
  cmd->add_option("--f", o->f, "clock, GHz")->capture_default_str();
  cmd->add_option("--w", o->w, "word bits")->capture_default_str();
  cmd->add_flag("--naive", o->naive, "unshadowed key multiplication");
  cmd->add_flag("--tfg", o->tfg, "twiddle factor generator variant");
  cmd->add_option("--sweep", o->sweep, "name=from:to[:step] over l, L, r, dnum or K");
  cmd->add_flag("--csv", o->csv, "CSV output");
  cmd->callback([o, &rc] { rc = run_analyze(*o); });
}

}  // namespace chipfhe::cli
