// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

#include "chipfhe/chipletsim.hpp"

namespace chipfhe::sim {

std::uint32_t Dag::add(MicroOp op) {
  ops.push_back(std::move(op));
  return static_cast<std::uint32_t>(ops.size() - 1);
}

const char* kind_name(OpKind k) {
  switch (k) {
    case OpKind::NTT: return "NTT";
    case OpKind::INTT: return "INTT";
    case OpKind::MAS: return "MAS";
    case OpKind::AUT: return "AUT";
    case OpKind::SEND: return "SEND";
    case OpKind::RECV: return "RECV";
    case OpKind::HBM_RD: return "HBM_RD";
    case OpKind::HBM_WR: return "HBM_WR";
    case OpKind::SYNC: return "SYNC";
  }
  return "?";
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::modup: return "modup";
    case Phase::keymul: return "keymul";
    case Phase::moddown: return "moddown";
    case Phase::rescale: return "rescale";
    case Phase::mult: return "mult";
    case Phase::add: return "add";
    case Phase::rotate: return "rotate";
    case Phase::sync: return "sync";
  }
  return "?";
}

namespace {

constexpr int kUnits = 5;

using Key = std::tuple<std::int64_t, int, int, std::uint32_t>;

void check_acyclic(const Dag& dag) {
  const std::size_t n = dag.ops.size();
  std::vector<std::uint32_t> indeg(n, 0);
  std::vector<std::vector<std::uint32_t>> children(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (const auto* list : {&dag.ops[i].deps, &dag.ops[i].after})
      for (auto d : *list) {
        if (d >= n) throw ConfigError("op " + std::to_string(i) + " depends on missing op " + std::to_string(d));
        children[d].push_back(i);
        ++indeg[i];
      }
  }
  std::vector<std::uint32_t> stack;
  for (std::uint32_t i = 0; i < n; ++i)
    if (indeg[i] == 0) stack.push_back(i);
  std::size_t seen = 0;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    ++seen;
    for (auto c : children[i])
      if (--indeg[c] == 0) stack.push_back(c);
  }
  if (seen != n)
    throw DeadlockDetected(std::to_string(n - seen) + " micro-ops lie on or behind a dependency cycle");
}

}  // namespace

std::vector<Timing> run_schedule(const ChipletConfig& cfg, const Dag& dag) {
  cfg.validate();
  check_acyclic(dag);
  const std::size_t n = dag.ops.size();
  std::vector<std::uint32_t> indeg(n, 0);
  std::vector<std::vector<std::uint32_t>> children(n), successors(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& op = dag.ops[i];
    if (op.chiplet < 0 || op.chiplet >= cfg.r) throw ConfigError("op chiplet outside [0, r)");
    for (auto d : op.deps) {
      children[d].push_back(i);
      ++indeg[i];
    }
    for (auto d : op.after) {
      successors[d].push_back(i);
      ++indeg[i];
    }
  }

  const std::size_t n_units = static_cast<std::size_t>(cfg.r) * kUnits;
  std::vector<std::set<Key>> ready(n_units);
  std::vector<char> running(n_units, 0);
  std::vector<Timing> t(n);

  // (time, tag, id): tag 0 releases a unit, tag 1 publishes a result.
  using Event = std::tuple<u64, int, std::uint32_t>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::vector<std::size_t> dirty;
  std::size_t done = 0;

  auto unit_of = [&](const MicroOp& op) {
    return static_cast<std::size_t>(op.chiplet) * kUnits + static_cast<std::size_t>(op.unit);
  };

  std::vector<std::uint32_t> instant;
  auto make_ready = [&](std::uint32_t i, u64 now) {
    const auto& op = dag.ops[i];
    if (op.unit == Unit::none) {
      t[i] = {now, now, now};
      instant.push_back(i);
      return;
    }
    const auto u = unit_of(op);
    ready[u].insert({op.rank, op.digit, op.limb, i});
    dirty.push_back(u);
  };
  auto release = [&](const std::vector<std::uint32_t>& list, u64 now) {
    for (auto c : list)
      if (--indeg[c] == 0) make_ready(c, now);
  };
  auto finish = [&](std::uint32_t i, u64 now) {
    ++done;
    release(children[i], now);
  };
  auto drain_instant = [&](u64 now) {
    while (!instant.empty()) {
      const auto i = instant.back();
      instant.pop_back();
      release(successors[i], now);
      finish(i, now);
    }
  };

  for (std::uint32_t i = 0; i < n; ++i)
    if (indeg[i] == 0) make_ready(i, 0);
  drain_instant(0);

  u64 now = 0;
  for (;;) {
    while (!dirty.empty()) {
      const auto u = dirty.back();
      dirty.pop_back();
      if (running[u] || ready[u].empty()) continue;
      const auto it = ready[u].begin();
      const auto i = std::get<3>(*it);
      ready[u].erase(it);
      const auto& op = dag.ops[i];
      t[i].start = now;
      t[i].end = now + op.duration;
      t[i].ready = t[i].end + op.fill;
      running[u] = 1;
      events.emplace(t[i].end, 0, i);
      events.emplace(t[i].ready, 1, i);
    }
    if (events.empty()) break;
    now = std::get<0>(events.top());
    while (!events.empty() && std::get<0>(events.top()) == now) {
      const auto [time, tag, i] = events.top();
      events.pop();
      if (tag == 0) {
        const auto u = unit_of(dag.ops[i]);
        running[u] = 0;
        dirty.push_back(u);
        release(successors[i], time);
      } else {
        finish(i, time);
      }
    }
    drain_instant(now);
  }
  if (done != n) throw DeadlockDetected(std::to_string(n - done) + " micro-ops never became ready");
  return t;
}

PhaseCensus& CycleReport::phase(Phase p) {
  switch (p) {
    case Phase::modup: return modup;
    case Phase::keymul: return keymul;
    case Phase::moddown: return moddown;
    case Phase::rescale: return rescale;
    case Phase::mult: return mult;
    case Phase::add: return add;
    case Phase::rotate: return rotate;
    case Phase::sync: break;
  }
  throw DomainError("sync ops carry no census");
}

const PhaseCensus& CycleReport::phase(Phase p) const { return const_cast<CycleReport*>(this)->phase(p); }

PhaseCensus CycleReport::total() const {
  PhaseCensus s;
  for (const auto* p : {&modup, &keymul, &moddown, &rescale, &mult, &add, &rotate}) {
    s.intt += p->intt;
    s.ntt += p->ntt;
    s.mas += p->mas;
    s.bconv += p->bconv;
    s.aut += p->aut;
  }
  return s;
}

namespace {

bool is_compute(Unit u) { return u == Unit::pu || u == Unit::aut || u == Unit::mas; }

enum class Wait { none, c2c, hbm };

// Follows the latest-ready dependency through zero-time ops to the real cause.
Wait classify_wait(const Dag& dag, const std::vector<Timing>& t, std::uint32_t i) {
  for (;;) {
    const auto& op = dag.ops[i];
    if (op.deps.empty()) return Wait::none;
    std::uint32_t bind = op.deps.front();
    for (auto d : op.deps)
      if (t[d].ready > t[bind].ready || (t[d].ready == t[bind].ready && d > bind)) bind = d;
    const auto& b = dag.ops[bind];
    if (b.kind == OpKind::SEND || (b.kind == OpKind::RECV && !b.local)) return Wait::c2c;
    if (b.kind == OpKind::HBM_RD) return Wait::hbm;
    if (b.duration > 0 || b.kind == OpKind::SYNC) return Wait::none;
    i = bind;
  }
}

}  // namespace

CycleReport make_report(const ChipletConfig& cfg, const Dag& dag, const std::vector<Timing>& t) {
  CycleReport rep;
  rep.f_ghz = cfg.f_ghz;
  const std::size_t n = dag.ops.size();
  for (std::size_t i = 0; i < n; ++i) rep.total_cycles = std::max(rep.total_cycles, t[i].ready);
  rep.wall_ms = static_cast<double>(rep.total_cycles) / (cfg.f_ghz * 1e6);

  rep.chiplets.assign(static_cast<std::size_t>(cfg.r), {});
  rep.links.assign(static_cast<std::size_t>(cfg.r), {});
  for (int c = 0; c < cfg.r; ++c) {
    rep.links[c].from = c;
    rep.links[c].to = (c + 1) % cfg.r;
  }
  std::vector<std::vector<std::uint32_t>> compute(static_cast<std::size_t>(cfg.r));
  u64 c0_moddown_recv = 0, moddown_intt = 0, transforms = 0;

  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& op = dag.ops[i];
    auto& cs = rep.chiplets[op.chiplet];
    if (is_compute(op.unit) && op.duration > 0) compute[op.chiplet].push_back(i);
    if (op.unit == Unit::pu) cs.pu_busy += op.duration;
    if (op.kind == OpKind::NTT || op.kind == OpKind::INTT) {
      ++cs.transforms;
      ++transforms;
    }
    if (op.kind == OpKind::SEND) {
      ++rep.link_transfers;
      rep.link_bytes += op.bytes;
      if (op.dest == (op.chiplet + 1) % cfg.r) {
        auto& l = rep.links[op.chiplet];
        l.bytes += op.bytes;
        ++l.transfers;
        l.busy += op.duration;
      } else {
        rep.links.push_back({op.chiplet, op.dest, op.bytes, 1, op.duration, 0});
      }
    }
    if (op.kind == OpKind::RECV) {
      ++rep.polynomials_transferred;
      if (!op.local) ++rep.recv_remote;
      if (op.ring_c0_moddown) ++c0_moddown_recv;
    }
    if (op.phase == Phase::sync) continue;
    auto& pc = rep.phase(op.phase);
    switch (op.kind) {
      case OpKind::NTT: pc.ntt += op.count; break;
      case OpKind::INTT:
        pc.intt += op.count;
        if (op.phase == Phase::moddown) ++moddown_intt;
        break;
      case OpKind::MAS: (op.bconv ? pc.bconv : pc.mas) += op.count; break;
      case OpKind::AUT: pc.aut += op.count; break;
      default: break;
    }
  }

  // Merge links that share endpoints (strawman point-to-point traffic).
  std::vector<LinkStats> merged;
  for (const auto& l : rep.links) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const LinkStats& m) { return m.from == l.from && m.to == l.to; });
    if (it == merged.end()) {
      merged.push_back(l);
    } else {
      it->bytes += l.bytes;
      it->transfers += l.transfers;
      it->busy += l.busy;
    }
  }
  rep.links.clear();
  for (auto& l : merged) {
    if (cfg.r == 1 && l.transfers == 0) continue;
    l.occupancy = rep.total_cycles ? static_cast<double>(l.busy) / static_cast<double>(rep.total_cycles) : 0.0;
    rep.links.push_back(l);
  }

  double util_sum = 0, c2c_sum = 0;
  for (int c = 0; c < cfg.r; ++c) {
    auto& cs = rep.chiplets[c];
    auto& ops = compute[c];
    std::sort(ops.begin(), ops.end(), [&](auto a, auto b) { return std::tie(t[a].start, a) < std::tie(t[b].start, b); });
    u64 cursor = 0;
    for (auto i : ops) {
      if (t[i].start > cursor) {
        const u64 gap = t[i].start - cursor;
        switch (classify_wait(dag, t, i)) {
          case Wait::c2c:
            cs.stall_c2c += gap;
            if (dag.ops[i].phase == Phase::modup || dag.ops[i].phase == Phase::keymul) rep.stall_c2c_modup += gap;
            break;
          case Wait::hbm: cs.stall_hbm += gap; break;
          case Wait::none: cs.idle += gap; break;
        }
      }
      if (t[i].end > cursor) {
        cs.busy += t[i].end - std::max(cursor, t[i].start);
        cursor = t[i].end;
      }
    }
    cs.idle += rep.total_cycles - cursor;
    cs.stall = cs.stall_c2c + cs.stall_hbm;
    cs.ntt_utilization = rep.total_cycles ? static_cast<double>(cs.pu_busy) / static_cast<double>(rep.total_cycles) : 0.0;
    util_sum += cs.ntt_utilization;
    c2c_sum += static_cast<double>(cs.stall_c2c);
    rep.stall_c2c_total += cs.stall_c2c;
    rep.stall_hbm_total += cs.stall_hbm;
  }
  rep.ntt_utilization = util_sum / cfg.r;
  rep.comm_overhead = rep.total_cycles ? c2c_sum / cfg.r / static_cast<double>(rep.total_cycles) : 0.0;

  const std::int64_t exposed =
      dag.digit_flow ? static_cast<std::int64_t>(c0_moddown_recv) - static_cast<std::int64_t>(moddown_intt) : 0;
  rep.census_ntt_equivalent = analytic::Rational(static_cast<std::int64_t>(transforms) + exposed, cfg.r);
  return rep;
}

}  // namespace chipfhe::sim
