// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chipfhe/analytic.hpp"
#include "chipfhe/error.hpp"

namespace chipfhe::sim {

using u64 = std::uint64_t;

enum class CommModel { bandwidth, twice_linear };

struct ChipletConfig {
  u64 n1 = 1024;
  u64 n2 = 64;
  double f_ghz = 1.5;
  int r = 4;
  double hbm_gbps = 1200.0;  // per stack
  int hbm_stacks = 1;
  double c2c_gbps = 630.0;
  double ingress_gbps = 128.0;
  int word_bits = 54;
  int fill_cycles = -1;  // -1: log2(N)
  bool exact = false;    // zero pipeline fill
  bool mas_fused = true;
  CommModel comm = CommModel::bandwidth;

  u64 n() const { return n1 * n2; }
  u64 poly_bytes() const;
  u64 transfer_cycles() const;
  u64 hbm_cycles() const;
  u64 fill() const;
  /// Throws ConfigError with the field name.
  void validate() const;
};

enum class OpKind : std::uint8_t { NTT, INTT, MAS, AUT, SEND, RECV, HBM_RD, HBM_WR, SYNC };
enum class Unit : std::uint8_t { pu, aut, mas, link, hbm, none };
enum class Phase : std::uint8_t { modup, keymul, moddown, rescale, mult, add, rotate, sync };

const char* kind_name(OpKind k);
const char* phase_name(Phase p);

struct MicroOp {
  OpKind kind = OpKind::SYNC;
  Unit unit = Unit::none;
  Phase phase = Phase::sync;
  int chiplet = 0;
  int dest = -1;  // SEND only
  int limb = -1;
  int digit = -1;
  int component = 0;
  u64 duration = 0;
  u64 fill = 0;
  std::int64_t rank = 0;
  std::uint32_t count = 1;   // census multiplicity
  bool bconv = false;        // MAS that performs base conversion
  bool local = false;        // RECV satisfied on the producing chiplet
  bool ring_c0_moddown = false;  // remote RECV of a first-component ModDown broadcast
  u64 bytes = 0;
  std::uint32_t macro = 0;
  std::vector<std::uint32_t> deps;
  std::vector<std::uint32_t> after;  // issue order only: released when the predecessor frees its unit
};

struct Dag {
  std::vector<MicroOp> ops;
  bool digit_flow = false;  // enables the exposed-communication census term
  std::uint32_t add(MicroOp op);
};

struct Timing {
  u64 start = 0;
  u64 end = 0;    // unit released
  u64 ready = 0;  // result visible to dependents
};

/// Event-driven list scheduling. Each unit runs one op at a time; ready
/// ops compete by (rank, digit, limb, id). Throws DeadlockDetected on cycles.
std::vector<Timing> run_schedule(const ChipletConfig& cfg, const Dag& dag);

enum class AssignMode { interleaved, sequential, digitwise };

struct LimbAssignment {
  AssignMode mode = AssignMode::interleaved;
  int r = 4;
  int l_max = 30;
  int k = 1;

  /// Chiplet of q-limb i (0..L) or special limb p_k (index L+1+k).
  int chiplet(int index) const;
};

AssignMode parse_assign_mode(const std::string& s);

enum class MacroKind { HADD, HMULT, KEYSWITCH, ROTATE, RESCALE, MODDOWN, MODDOWN_RESCALE };
enum class Strategy { ring, alternate, digitwise, strawman_a, strawman_b, strawman_c };

MacroKind parse_macro(const std::string& s);
Strategy parse_strategy(const std::string& s);

struct MacroOp {
  MacroKind kind = MacroKind::KEYSWITCH;
  int l = 0;
  int rot = 0;
};

struct Program {
  int l_max = 30;
  int dnum = 31;
  std::vector<MacroOp> ops;

  int k() const { return (l_max + dnum) / dnum; }
};

struct ExpandOptions {
  Strategy strategy = Strategy::ring;
  bool include_moddown = true;
  bool hbm_keys = true;
  int intt_lookahead = 0;  // rounds a ring INTT may run ahead of its own batch
};

struct StepInfo {
  std::uint32_t macro = 0;
  MacroKind kind = MacroKind::KEYSWITCH;
  int level = 0;
  std::vector<int> limbs_per_chiplet;
};

Dag expand_program(const ChipletConfig& cfg, const Program& prog, const LimbAssignment& assign,
                   const ExpandOptions& opt, std::vector<StepInfo>* steps = nullptr);

struct PhaseCensus {
  u64 intt = 0, ntt = 0, mas = 0, bconv = 0, aut = 0;
  bool operator==(const PhaseCensus&) const = default;
};

struct ChipletStats {
  u64 busy = 0, idle = 0, stall = 0;
  u64 stall_c2c = 0, stall_hbm = 0;
  u64 pu_busy = 0;
  u64 transforms = 0;
  double ntt_utilization = 0;
};

struct LinkStats {
  int from = 0, to = 0;
  u64 bytes = 0, transfers = 0, busy = 0;
  double occupancy = 0;
};

struct CycleReport {
  u64 total_cycles = 0;
  double wall_ms = 0;
  double f_ghz = 0;
  std::vector<ChipletStats> chiplets;
  std::vector<LinkStats> links;
  u64 polynomials_transferred = 0;  // one per consuming chiplet
  u64 link_transfers = 0;
  u64 link_bytes = 0;
  u64 recv_remote = 0;
  double ntt_utilization = 0;
  double comm_overhead = 0;
  u64 stall_c2c_modup = 0;
  u64 stall_c2c_total = 0;
  u64 stall_hbm_total = 0;
  PhaseCensus modup, keymul, moddown, rescale, mult, add, rotate;
  analytic::Rational census_ntt_equivalent;
  std::vector<StepInfo> steps;
  std::vector<std::string> warnings;

  PhaseCensus& phase(Phase p);
  const PhaseCensus& phase(Phase p) const;
  PhaseCensus total() const;
};

CycleReport make_report(const ChipletConfig& cfg, const Dag& dag, const std::vector<Timing>& t);

CycleReport run_workload(const ChipletConfig& cfg, const Program& prog, const LimbAssignment& assign,
                         const ExpandOptions& opt = {}, Dag* dag_out = nullptr, std::vector<Timing>* timing_out = nullptr);

/// dnum = L+1 ring KeySwitch at level l (sources 0..l, targets 0..l and p).
CycleReport schedule_keyswitch_ring(const ChipletConfig& cfg, int l, int l_max, bool include_moddown = true);
CycleReport schedule_moddown_ring(const ChipletConfig& cfg, int l, int l_max, bool fused_rescale = false);
CycleReport schedule_keyswitch_digits(const ChipletConfig& cfg, int l, int l_max, int dnum,
                                      Strategy strategy = Strategy::alternate);
/// Strawmen use the 2 N1 transfer model; A runs on 4 chiplets, B and C on l+2.
ChipletConfig strawman_config(const ChipletConfig& cfg, int l, Strategy technique);
CycleReport schedule_strawman(const ChipletConfig& cfg, int l, Strategy technique);

struct SweepRow {
  int r = 0;
  u64 cycles = 0;
  double wall_ms = 0;
  double amortized_ns = 0;  // per limb
  double ntt_utilization = 0;
};

std::vector<SweepRow> sweep_chiplets(const ChipletConfig& base, const std::vector<int>& r_list, int l, int l_max);

// JSON and CSV interfaces.
ChipletConfig config_from_json(const std::string& text);
std::string config_to_json(const ChipletConfig& cfg);
Program program_from_json(const std::string& text);
std::string report_to_json(const CycleReport& r);
void write_timeline_csv(std::ostream& os, const Dag& dag, const std::vector<Timing>& t);

}  // namespace chipfhe::sim
