// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "chipfhe/analytic.hpp"
#include "chipfhe/chipletsim.hpp"

using namespace chipfhe::sim;
namespace an = chipfhe::analytic;

namespace {

Program single(MacroKind k, int l, int l_max = 30) {
  Program p;
  p.l_max = l_max;
  p.dnum = l_max + 1;
  p.ops.push_back({k, l, 0});
  return p;
}

Program depth_program() {
  Program p;
  for (int l = 30; l >= 0; --l) {
    p.ops.push_back({MacroKind::HMULT, l, 0});
    p.ops.push_back({MacroKind::KEYSWITCH, l, 0});
    if (l > 0) p.ops.push_back({MacroKind::RESCALE, l, 0});
  }
  return p;
}

void check_phase(const PhaseCensus& s, const an::PhaseCounts& a) {
  CHECK(s.intt == a.intt);
  CHECK(s.ntt == a.ntt);
  CHECK(s.mas == a.mas);
  CHECK(s.bconv == a.bconv);
}

}  // namespace

TEST_CASE("config derived quantities") {
  ChipletConfig c;
  CHECK(c.n() == 65536);
  CHECK(c.poly_bytes() == 65536ull * 54 / 8);
  CHECK(c.fill() == 16);
  CHECK(c.transfer_cycles() == 1054);  // ceil(442368 / 420)
  CHECK(c.hbm_cycles() == 553);
  c.exact = true;
  CHECK(c.fill() == 0);
  c.comm = CommModel::twice_linear;
  CHECK(c.transfer_cycles() == 2048);
}

TEST_CASE("config validation names the field") {
  ChipletConfig c;
  c.n1 = 1000;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("n1"), chipfhe::ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"c2c_bw": -1})"), chipfhe::ConfigError);
  CHECK_THROWS_WITH_AS(config_from_json(R"({"r": 0})"), doctest::Contains("r:"), chipfhe::ConfigError);
  CHECK_THROWS_AS(config_from_json("{"), chipfhe::ConfigError);
  CHECK_THROWS_AS(program_from_json(R"({"L": 8, "dnum": 3, "program": [{"op": "BOOTSTRAP_SCHED"}]})"),
                  chipfhe::UnsupportedConfig);
  CHECK_THROWS_AS(program_from_json(R"({"L": 8, "dnum": 3, "program": [{"op": "HMULT", "l": 9}]})"),
                  chipfhe::ConfigError);
}

TEST_CASE("config json round trip") {
  ChipletConfig c;
  c.n1 = 512;
  c.n2 = 128;
  c.hbm_stacks = 2;
  c.comm = CommModel::twice_linear;
  const ChipletConfig d = config_from_json(config_to_json(c));
  CHECK(d.n1 == 512);
  CHECK(d.n2 == 128);
  CHECK(d.hbm_stacks == 2);
  CHECK(d.comm == CommModel::twice_linear);
}

TEST_CASE("limb assignment") {
  LimbAssignment in{AssignMode::interleaved, 4, 30, 1};
  LimbAssignment seq{AssignMode::sequential, 4, 30, 1};
  CHECK(in.chiplet(0) == 0);
  CHECK(in.chiplet(5) == 1);
  CHECK(in.chiplet(31) == 3);  // p_0
  CHECK(seq.chiplet(7) == 0);
  CHECK(seq.chiplet(8) == 1);
  CHECK(seq.chiplet(30) == 3);
  LimbAssignment dig{AssignMode::digitwise, 4, 23, 6};
  CHECK(dig.chiplet(5) == 0);
  CHECK(dig.chiplet(6) == 1);
  CHECK(dig.chiplet(23) == 3);
}

TEST_CASE("cyclic dag is rejected") {
  Dag d;
  MicroOp a;
  a.kind = OpKind::NTT;
  a.unit = Unit::pu;
  a.duration = 10;
  const auto i = d.add(a);
  const auto j = d.add(a);
  d.ops[i].deps.push_back(j);
  d.ops[j].deps.push_back(i);
  CHECK_THROWS_AS(run_schedule(ChipletConfig{}, d), chipfhe::DeadlockDetected);
}

TEST_CASE("schedule conservation and accounting") {
  ChipletConfig c;
  Dag dag;
  std::vector<Timing> t;
  const CycleReport r = run_workload(c, single(MacroKind::KEYSWITCH, 30), {}, {}, &dag, &t);

  std::map<std::uint32_t, int> remote_recvs;
  u64 send_bytes = 0, recv_bytes = 0;
  for (std::uint32_t i = 0; i < dag.ops.size(); ++i) {
    const auto& op = dag.ops[i];
    if (op.kind == OpKind::SEND) {
      send_bytes += op.bytes;
      CHECK(op.dest == (op.chiplet + 1) % c.r);
    }
    if (op.kind == OpKind::RECV && !op.local) {
      recv_bytes += op.bytes;
      for (auto d : op.deps)
        if (dag.ops[d].kind == OpKind::SEND) ++remote_recvs[d];
    }
    for (auto d : op.deps) CHECK(t[d].ready <= t[i].start);
    CHECK(t[i].end <= r.total_cycles);
  }
  for (std::uint32_t i = 0; i < dag.ops.size(); ++i)
    if (dag.ops[i].kind == OpKind::SEND) CHECK(remote_recvs[i] == 1);
  CHECK(send_bytes == recv_bytes);
  CHECK(send_bytes == r.link_bytes);

  for (const auto& s : r.chiplets) {
    CHECK(s.busy + s.idle + s.stall == r.total_cycles);
    CHECK(s.stall_c2c + s.stall_hbm <= s.stall);
  }
  u64 link_sum = 0;
  for (const auto& l : r.links) {
    CHECK(l.to == (l.from + 1) % c.r);
    CHECK(l.occupancy <= 1.0);
    link_sum += l.bytes;
  }
  CHECK(link_sum == r.link_bytes);
}

TEST_CASE("deterministic reports") {
  ChipletConfig c;
  const auto a = report_to_json(schedule_keyswitch_digits(c, 22, 22, 3));
  const auto b = report_to_json(schedule_keyswitch_digits(c, 22, 22, 3));
  CHECK(a == b);
  CHECK(a.find("\"schema\": 1") != std::string::npos);
}

TEST_CASE("single chiplet moves no data") {
  ChipletConfig c;
  c.r = 1;
  const auto r = schedule_keyswitch_ring(c, 30, 30);
  CHECK(r.link_bytes == 0);
  CHECK(r.links.empty());
  CHECK(r.recv_remote == 0);
}

TEST_CASE("cycles are monotone in c2c bandwidth") {
  ChipletConfig c;
  u64 prev = 0;
  for (int h = 0; h <= 4; ++h) {
    ChipletConfig m = c;
    m.c2c_gbps = 630.0 / (1 << h);
    const auto r = schedule_keyswitch_ring(m, 30, 30);
    CHECK(r.total_cycles >= prev);
    prev = r.total_cycles;
  }
}

TEST_CASE("shadowed key multiplication hits the transform bound") {
  ChipletConfig c;
  c.r = 1;
  c.exact = true;
  const auto shadow = schedule_keyswitch_ring(c, 30, 30, false);
  CHECK(shadow.total_cycles == an::keyswitch_cycles(30, 1024, true));
  CHECK(shadow.total_cycles == 1047552);
  c.mas_fused = false;
  const auto naive = schedule_keyswitch_ring(c, 30, 30, false);
  CHECK(naive.total_cycles == 3079168);
  CHECK(1.0 - static_cast<double>(shadow.total_cycles) / naive.total_cycles ==
        doctest::Approx(an::shadow_improvement(30).value()).epsilon(0.01));
}

TEST_CASE("transfer counts equal closed forms") {
  ChipletConfig c;
  for (int l : {6, 14, 30}) {
    CAPTURE(l);
    CHECK(an::Rational(schedule_keyswitch_ring(c, l, l).polynomials_transferred) ==
          an::comm_polynomials(an::Technique::OURS, l, l + 1, 1, 4));
    CHECK(an::Rational(schedule_strawman(c, l, Strategy::strawman_a).polynomials_transferred) ==
          an::comm_polynomials(an::Technique::A, l, l + 1, 1, 4));
    CHECK(an::Rational(schedule_strawman(c, l, Strategy::strawman_b).polynomials_transferred) ==
          an::comm_polynomials(an::Technique::B, l, l + 1, 1, 4));
    CHECK(an::Rational(schedule_strawman(c, l, Strategy::strawman_c).polynomials_transferred) ==
          an::comm_polynomials(an::Technique::C, l, l + 1, 1, 4));
  }
  CHECK(schedule_keyswitch_ring(c, 30, 30).polynomials_transferred == 132);
  CHECK(schedule_strawman(c, 30, Strategy::strawman_a).polynomials_transferred == 1056);
  CHECK(schedule_strawman(c, 30, Strategy::strawman_b).polynomials_transferred == 1054);
}

TEST_CASE("ring modup stalls appear only under reduced bandwidth") {
  ChipletConfig c;
  for (int h = 0; h <= 2; ++h) {
    ChipletConfig m = c;
    m.c2c_gbps = 630.0 / (1 << h);
    CHECK(schedule_keyswitch_ring(m, 30, 30).stall_c2c_modup == 0);
  }
  c.c2c_gbps = 630.0 / 8;
  CHECK(schedule_keyswitch_ring(c, 30, 30).stall_c2c_modup > 0);
}

TEST_CASE("census matches closed-form keyswitch counts") {
  ChipletConfig c;
  c.exact = true;
  for (int l : {0, 5, 30}) {
    CAPTURE(l);
    const auto r = schedule_keyswitch_ring(c, l, 30);
    const auto a = an::keyswitch_census_full(l);
    check_phase(r.modup, a.modup);
    check_phase(r.keymul, a.keymul);
    check_phase(r.moddown, a.moddown);
  }
  for (auto [l, dnum] : {std::pair{11, 3}, {23, 4}, {22, 3}}) {
    CAPTURE(l);
    const int k = (l + dnum) / dnum;
    const auto r = schedule_keyswitch_digits(c, l, l, dnum);
    const auto a = an::keyswitch_census_generic(l, k);
    check_phase(r.modup, a.modup);
    check_phase(r.keymul, a.keymul);
    check_phase(r.moddown, a.moddown);
  }
}

TEST_CASE("digit flow census grid") {
  ChipletConfig c;
  c.exact = true;
  for (int l : {11, 23, 35})
    for (int dnum : {2, 3, 4}) {
      CAPTURE(l);
      CAPTURE(dnum);
      const auto r = schedule_keyswitch_digits(c, l, l, dnum);
      CHECK(r.census_ntt_equivalent == an::digit_flow_census(l, dnum, (l + 1) / dnum, 4));
    }
}

TEST_CASE("digit flow keeps the transform unit busy") {
  const auto r = schedule_keyswitch_digits(ChipletConfig{}, 22, 22, 3);
  CHECK(r.ntt_utilization >= 0.90);
  CHECK(r.comm_overhead <= 0.08);
}

TEST_CASE("interleaved assignment idles less than sequential") {
  ChipletConfig c;
  const Program p = depth_program();
  const auto in = run_workload(c, p, {AssignMode::interleaved, 4, 30, 1});
  const auto seq = run_workload(c, p, {AssignMode::sequential, 4, 30, 1});
  u64 idle_in = 0, idle_seq = 0;
  for (const auto& s : in.chiplets) idle_in += s.idle;
  for (const auto& s : seq.chiplets) idle_seq += s.idle;
  CHECK(idle_in < idle_seq);
  CHECK(in.total_cycles < seq.total_cycles);
  REQUIRE(!in.steps.empty());
  for (const auto& s : in.steps) {
    const auto [lo, hi] = std::minmax_element(s.limbs_per_chiplet.begin(), s.limbs_per_chiplet.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("workload macros") {
  ChipletConfig c;
  const auto add = run_workload(c, single(MacroKind::HADD, 10), {});
  CHECK(add.add.mas == 22);
  CHECK(add.link_bytes == 0);
  const auto rot = run_workload(c, single(MacroKind::ROTATE, 10), {});
  CHECK(rot.rotate.aut == 22);
  CHECK(rot.link_bytes > 0);
  const auto rs = run_workload(c, single(MacroKind::RESCALE, 10), {});
  CHECK(rs.rescale.intt >= 2);
  const auto md = schedule_moddown_ring(c, 30, 30);
  const auto mf = schedule_moddown_ring(c, 30, 30, true);
  CHECK(mf.total_cycles <= md.total_cycles);
}

TEST_CASE("chiplet bound warning") {
  ChipletConfig c;
  c.r = 8;
  const auto r = run_workload(c, single(MacroKind::KEYSWITCH, 30), {AssignMode::interleaved, 8, 30, 1});
  CHECK(!r.warnings.empty());
}

TEST_CASE("sweep amortizes per limb") {
  const auto rows = sweep_chiplets(ChipletConfig{}, {4, 8}, 30, 30);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].amortized_ns == doctest::Approx(rows[0].wall_ms * 1e6 / 31));
  CHECK(rows[1].wall_ms < rows[0].wall_ms);
}

TEST_CASE("timeline csv") {
  ChipletConfig c;
  Dag dag;
  std::vector<Timing> t;
  run_workload(c, single(MacroKind::KEYSWITCH, 4, 8), {AssignMode::interleaved, 4, 8, 1}, {}, &dag, &t);
  std::ostringstream os;
  write_timeline_csv(os, dag, t);
  const std::string s = os.str();
  CHECK(s.rfind("chiplet,start,end,kind,limb,phase\n", 0) == 0);
  CHECK(s.find("INTT") != std::string::npos);
  CHECK(s.find(",RECV,") == std::string::npos);
}
