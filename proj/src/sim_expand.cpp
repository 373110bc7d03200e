// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>

#include "chipfhe/chipletsim.hpp"

namespace chipfhe::sim {

namespace {

constexpr std::int64_t kUrgent = -2;
constexpr std::int64_t kLate = 1'000'000;

using Avail = std::vector<std::int64_t>;  // per chiplet: op that makes the data visible, or -1

class Builder {
 public:
  Builder(const ChipletConfig& cfg, const LimbAssignment& as, const ExpandOptions& opt, const Program& prog, Dag& dag)
      : cfg_(cfg), as_(as), opt_(opt), prog_(prog), dag_(dag), r_(cfg.r) {}

  void macro(std::uint32_t index, const MacroOp& m) {
    macro_ = index;
    first_op_ = dag_.ops.size();
    switch (m.kind) {
      case MacroKind::HADD: elementwise(m.l, Phase::add, 1, 2); break;
      case MacroKind::HMULT: elementwise(m.l, Phase::mult, 4, 1); break;
      case MacroKind::KEYSWITCH: keyswitch(m.l); break;
      case MacroKind::ROTATE:
        for (int i = 0; i <= m.l; ++i)
          for (int comp = 0; comp < 2; ++comp) {
            MicroOp op = base(OpKind::AUT, Unit::aut, Phase::rotate, as_.chiplet(i), i);
            op.duration = cfg_.n1;
            op.component = comp;
            add(op);
          }
        sync();
        keyswitch(m.l);
        break;
      case MacroKind::RESCALE: rescale(m.l); break;
      case MacroKind::MODDOWN: moddown_k1(m.l, false); break;
      case MacroKind::MODDOWN_RESCALE: moddown_k1(m.l, true); break;
    }
    sync();
  }

 private:
  const ChipletConfig& cfg_;
  const LimbAssignment& as_;
  const ExpandOptions& opt_;
  const Program& prog_;
  Dag& dag_;
  int r_;
  std::uint32_t macro_ = 0;
  std::size_t first_op_ = 0;
  std::optional<std::uint32_t> barrier_;

  MicroOp base(OpKind kind, Unit unit, Phase phase, int chiplet, int limb) const {
    MicroOp op;
    op.kind = kind;
    op.unit = unit;
    op.phase = phase;
    op.chiplet = chiplet;
    op.limb = limb;
    return op;
  }

  std::uint32_t add(MicroOp op) {
    op.macro = macro_;
    if (op.deps.empty() && barrier_) op.deps.push_back(*barrier_);
    return dag_.add(std::move(op));
  }

  void sync() {
    MicroOp s;
    s.macro = macro_;
    for (std::size_t i = first_op_; i < dag_.ops.size(); ++i) s.deps.push_back(static_cast<std::uint32_t>(i));
    if (s.deps.empty()) return;
    if (barrier_) s.deps.push_back(*barrier_);
    barrier_ = dag_.add(std::move(s));
    first_op_ = dag_.ops.size();
  }

  std::uint32_t transform(OpKind kind, Phase phase, int chiplet, int limb, std::int64_t rank,
                          std::vector<std::uint32_t> deps, int digit = -1) {
    MicroOp op = base(kind, Unit::pu, phase, chiplet, limb);
    op.duration = cfg_.n1;
    op.fill = cfg_.fill();
    op.rank = rank;
    op.digit = digit;
    op.deps = std::move(deps);
    return add(op);
  }

  // MAS in the shadow of a transform: free when fused, serial on the PU otherwise.
  std::uint32_t shadow_mas(Phase phase, int chiplet, int limb, std::uint32_t count, std::int64_t rank,
                           std::vector<std::uint32_t> deps, bool bconv = false) {
    MicroOp op = base(OpKind::MAS, cfg_.mas_fused ? Unit::mas : Unit::pu, phase, chiplet, limb);
    op.duration = cfg_.mas_fused ? 0 : count * cfg_.n1;
    op.count = count;
    op.bconv = bconv;
    op.rank = rank;
    op.deps = std::move(deps);
    return add(op);
  }

  bool ring_topology() const {
    return opt_.strategy != Strategy::strawman_a && opt_.strategy != Strategy::strawman_b &&
           opt_.strategy != Strategy::strawman_c;
  }

  Avail broadcast(int src, std::uint32_t producer, const std::vector<char>& consumer, Phase phase, int limb,
                  std::int64_t rank, bool c0_moddown = false, int digit = -1) {
    Avail avail(static_cast<std::size_t>(r_), -1);
    auto recv = [&](int at, std::uint32_t dep, bool local) {
      MicroOp op = base(OpKind::RECV, Unit::none, phase, at, limb);
      op.local = local;
      op.ring_c0_moddown = c0_moddown && !local;
      op.bytes = local ? 0 : cfg_.poly_bytes();
      op.deps = {dep};
      return add(op);
    };
    auto send = [&](int from, int to, std::uint32_t dep) {
      MicroOp op = base(OpKind::SEND, Unit::link, phase, from, limb);
      op.dest = to;
      op.duration = cfg_.transfer_cycles();
      op.bytes = cfg_.poly_bytes();
      op.rank = rank;
      op.digit = digit;
      op.deps = {dep};
      return add(op);
    };
    if (consumer[src]) avail[src] = recv(src, producer, true);
    if (ring_topology()) {
      int far = 0;
      for (int d = 1; d < r_; ++d)
        if (consumer[(src + d) % r_]) far = d;
      std::uint32_t prev = producer;
      for (int d = 1; d <= far; ++d) {
        const int from = (src + d - 1) % r_, to = (src + d) % r_;
        const auto s = send(from, to, prev);
        prev = recv(to, s, false);
        avail[to] = prev;
      }
    } else {
      for (int c = 0; c < r_; ++c)
        if (c != src && consumer[c]) avail[c] = recv(c, send(src, c, producer), false);
    }
    return avail;
  }

  // Key limbs stream from HBM through a two-deep buffer in consumption order.
  struct KeyUse {
    std::tuple<std::int64_t, int, int> order;
    std::uint32_t consumer;
    int stream = 0;  // each stream has its own double buffer
  };

  void attach_key_reads(std::vector<std::vector<KeyUse>>& uses) {
    if (!opt_.hbm_keys) return;
    for (int c = 0; c < r_; ++c) {
      auto& list = uses[c];
      std::stable_sort(list.begin(), list.end(), [](const KeyUse& a, const KeyUse& b) { return a.order < b.order; });
      std::map<int, std::vector<std::uint32_t>> consumed;
      for (const auto& use : list) {
        auto& prev = consumed[use.stream];
        MicroOp op = base(OpKind::HBM_RD, Unit::hbm, Phase::keymul, c, std::get<2>(use.order));
        op.duration = cfg_.hbm_cycles();
        op.bytes = cfg_.poly_bytes();
        op.rank = std::get<0>(use.order);
        op.digit = std::get<1>(use.order);
        if (prev.size() >= 2) op.deps.push_back(prev[prev.size() - 2]);
        const auto rd = add(op);
        dag_.ops[use.consumer].deps.push_back(rd);
        prev.push_back(use.consumer);
      }
    }
  }

  void elementwise(int l, Phase phase, std::uint32_t count, int components) {
    for (int i = 0; i <= l; ++i)
      for (int comp = 0; comp < components; ++comp) {
        MicroOp op = base(OpKind::MAS, Unit::mas, phase, as_.chiplet(i), i);
        op.duration = count * cfg_.n1;
        op.count = count;
        op.component = comp;
        add(op);
      }
  }

  void keyswitch(int l) {
    switch (opt_.strategy) {
      case Strategy::strawman_a: strawman_a(l); return;
      case Strategy::strawman_b: strawman_bc(l, false); return;
      case Strategy::strawman_c: strawman_bc(l, true); return;
      case Strategy::digitwise: digits(l, true); return;
      case Strategy::alternate: digits(l, false); return;
      case Strategy::ring:
        if (prog_.k() == 1) ring(l);
        else digits(l, false);
        return;
    }
  }

  // dnum = L+1: each INTT result travels the ring once while every chiplet
  // runs NTT + KeyMul for its own targets.
  void ring(int l) {
    const int p_index = as_.l_max + 1;
    std::vector<std::vector<int>> tgt(r_), src(r_);
    for (int j = 0; j <= l; ++j) tgt[as_.chiplet(j)].push_back(j);
    const int cp = as_.chiplet(p_index);
    tgt[cp].push_back(p_index);
    for (int i = 0; i <= l; ++i) src[as_.chiplet(i)].push_back(i);
    std::vector<char> consumer(r_), q_consumer(r_);
    for (int c = 0; c < r_; ++c) {
      consumer[c] = !tgt[c].empty();
      q_consumer[c] = std::any_of(tgt[c].begin(), tgt[c].end(), [&](int j) { return j != p_index; });
    }
    std::size_t min_src = src[0].size();
    for (const auto& s : src) min_src = std::min(min_src, s.size());
    std::vector<int> round(l + 1);
    for (int c = 0; c < r_; ++c)
      for (std::size_t k = 0; k < src[c].size(); ++k) round[src[c][k]] = static_cast<int>(k);
    auto arrival = [&](int i, int c) { return round[i] * r_ + (c - as_.chiplet(i) + r_) % r_; };

    std::vector<std::uint32_t> intt(l + 1);
    std::vector<Avail> avail(l + 1);
    for (int i = 0; i <= l; ++i) {
      const int c = as_.chiplet(i);
      intt[i] = transform(OpKind::INTT, Phase::modup, c, i, kUrgent - 1, {});
      avail[i] = broadcast(c, intt[i], consumer, Phase::modup, i, round[i] * r_);
    }

    std::vector<std::vector<KeyUse>> keys(r_);
    std::vector<std::vector<std::uint32_t>> acc(as_.l_max + 2);
    for (int c = 0; c < r_; ++c) {
      std::vector<int> order;
      for (int i = 0; i <= l; ++i)
        if (avail[i][c] >= 0 || as_.chiplet(i) == c) order.push_back(i);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return arrival(a, c) < arrival(b, c); });
      // Own INTT of round rho issues at arrival key rho*r. In a partial final
      // round it issues right after the previous own batch.
      std::vector<std::uint32_t> program;
      const int ahead = std::max(0, opt_.intt_lookahead);
      std::vector<std::pair<std::int64_t, std::uint32_t>> issue;
      for (std::size_t k = 0; k < src[c].size(); ++k) {
        const auto rho = static_cast<std::int64_t>(k);
        std::int64_t at = ahead == 0 ? rho * r_ : (rho - ahead) * r_ + 1;
        if (ahead == 0 && rho > 0 && min_src <= k) at = (rho - 1) * r_ + 1;
        issue.emplace_back(at, intt[src[c][k]]);
      }
      std::size_t next_intt = 0;
      for (int i : order) {
        const std::int64_t a = arrival(i, c);
        while (next_intt < issue.size() && issue[next_intt].first <= a) program.push_back(issue[next_intt++].second);
        const auto data = avail[i][c] >= 0 ? static_cast<std::uint32_t>(avail[i][c]) : intt[i];
        if (consumer[c]) {
          for (int pass = 0; pass < 2; ++pass)
            for (int j : tgt[c]) {
              if ((j == p_index) != (pass == 0)) continue;
              const bool is_p = j == p_index;
              const std::int64_t rank = is_p ? a - r_ : a;  // p runs up to one round ahead
              const auto ntt = transform(OpKind::NTT, Phase::modup, c, j, rank, {data});
              const auto mas = shadow_mas(Phase::keymul, c, j, 2, rank, {ntt});
              if (!is_p) {
                program.push_back(ntt);
                if (!cfg_.mas_fused) program.push_back(mas);
              }
              acc[j].push_back(mas);
              keys[c].push_back({{rank, static_cast<int>(a), j}, mas, is_p ? 1 : 0});
            }
        }
      }
      while (next_intt < issue.size()) program.push_back(issue[next_intt++].second);
      for (std::size_t k = 1; k < program.size(); ++k) dag_.ops[program[k]].after.push_back(program[k - 1]);
    }
    attach_key_reads(keys);
    if (!opt_.include_moddown) return;

    for (int comp = 0; comp < 2; ++comp) {
      const auto t = transform(OpKind::INTT, Phase::moddown, cp, p_index, kUrgent, acc[p_index]);
      const auto av = broadcast(cp, t, q_consumer, Phase::moddown, p_index, kUrgent);
      for (int c = 0; c < r_; ++c)
        for (int j : tgt[c]) {
          if (j == p_index) continue;
          const auto ntt = transform(OpKind::NTT, Phase::moddown, c, j, kLate + comp, {static_cast<std::uint32_t>(av[c])});
          auto deps = acc[j];
          deps.push_back(ntt);
          shadow_mas(Phase::moddown, c, j, 2, kLate + comp, deps);
        }
    }
  }

  // Hybrid KeySwitch with K > 1 special limbs. Alternate flow: every chiplet
  // INTTs its limbs first, premultiplied results go round the ring, then each
  // digit runs BConv -> NTT -> KeyMul on the target owners. With
  // local_modup each digit is expanded on one chiplet and the key products
  // are reduced at the target owners instead.
  void digits(int l, bool local_modup) {
    dag_.digit_flow = !local_modup;
    const int K = prog_.k();
    const int L = as_.l_max;
    const int n_digits = (l + K) / K;
    auto digit_of = [&](int i) { return i / K; };
    auto home = [&](int beta) { return local_modup ? beta % r_ : -1; };

    std::vector<std::vector<KeyUse>> keys(r_);
    std::vector<std::vector<std::uint32_t>> acc(L + 1 + K);
    std::vector<std::uint32_t> src_data(l + 1);
    std::vector<Avail> avail(l + 1);

    for (int i = 0; i <= l; ++i) {
      const int beta = digit_of(i);
      const int kb = std::min(K, l + 1 - beta * K);
      const int c = local_modup ? home(beta) : as_.chiplet(i);
      src_data[i] = transform(OpKind::INTT, Phase::modup, c, i, 0, {}, beta);
      if (kb > 1) src_data[i] = shadow_mas(Phase::modup, c, i, 1, 0, {src_data[i]}, true);
    }
    if (!local_modup) {
      for (int beta = 0; beta < n_digits; ++beta) {
        std::vector<char> consumer(r_, 0);
        for (int t = 0; t <= l; ++t)
          if (digit_of(t) != beta) consumer[as_.chiplet(t)] = 1;
        for (int k = 0; k < K; ++k) consumer[as_.chiplet(L + 1 + k)] = 1;
        for (int i = beta * K; i <= std::min(l, beta * K + K - 1); ++i)
          avail[i] = broadcast(as_.chiplet(i), src_data[i], consumer, Phase::modup, i, 0, false, beta);
      }
    }

    std::vector<std::vector<std::uint32_t>> partial(L + 1 + K);
    for (int beta = 0; beta < n_digits; ++beta) {
      const int lo = beta * K, hi = std::min(l, lo + K - 1), kb = hi - lo + 1;
      std::vector<int> targets;
      for (int t = 0; t <= l; ++t) targets.push_back(t);
      for (int k = 0; k < K; ++k) targets.push_back(L + 1 + k);
      for (int t : targets) {
        const bool is_p = t > L;
        const bool own = !is_p && t >= lo && t <= hi;
        const int c = local_modup ? home(beta) : as_.chiplet(t);
        const std::int64_t rank = is_p ? 1 + beta : 10 * (beta + 1);
        std::uint32_t mas;
        if (own) {
          mas = shadow_mas(Phase::keymul, c, t, 2, rank, {});
        } else {
          std::vector<std::uint32_t> deps;
          for (int i = lo; i <= hi; ++i)
            deps.push_back(local_modup ? src_data[i] : static_cast<std::uint32_t>(avail[i][c]));
          std::uint32_t in = deps.front();
          if (kb > 1) in = shadow_mas(Phase::modup, c, t, static_cast<std::uint32_t>(kb), rank, deps, true);
          const auto ntt = transform(OpKind::NTT, Phase::modup, c, t, rank, {in}, beta);
          mas = shadow_mas(Phase::keymul, c, t, 2, rank, {ntt});
        }
        dag_.ops[mas].digit = beta;
        keys[c].push_back({{rank, beta, t}, mas, is_p ? 1 : 0});
        (local_modup ? partial[t] : acc[t]).push_back(mas);
      }
    }
    attach_key_reads(keys);

    if (local_modup) {
      // Reduce each target's partial products at its owner, one polynomial per component.
      for (int t = 0; t < L + 1 + K; ++t) {
        if (partial[t].empty()) continue;
        const int owner = as_.chiplet(t);
        std::vector<char> only(r_, 0);
        only[owner] = 1;
        for (auto m : partial[t]) {
          const int from = dag_.ops[m].chiplet;
          if (from == owner) {
            acc[t].push_back(m);
            continue;
          }
          for (int comp = 0; comp < 2; ++comp) {
            const auto av = broadcast(from, m, only, Phase::keymul, t, 10 * (dag_.ops[m].digit + 1));
            acc[t].push_back(static_cast<std::uint32_t>(av[owner]));
          }
        }
      }
    }
    if (!opt_.include_moddown) return;

    std::vector<char> q_consumer(r_, 0);
    for (int i = 0; i <= l; ++i) q_consumer[as_.chiplet(i)] = 1;
    for (int comp = 0; comp < 2; ++comp) {
      std::vector<Avail> pav(K);
      for (int k = 0; k < K; ++k) {
        const int pi = L + 1 + k, c = as_.chiplet(pi);
        std::uint32_t t = transform(OpKind::INTT, Phase::moddown, c, pi, -1, acc[pi]);
        if (K > 1) t = shadow_mas(Phase::moddown, c, pi, 1, -1, {t}, true);
        pav[k] = broadcast(c, t, q_consumer, Phase::moddown, pi, kUrgent - 2 + comp, comp == 0 && !local_modup);
      }
      for (int i = 0; i <= l; ++i) {
        const int c = as_.chiplet(i);
        std::vector<std::uint32_t> deps;
        for (int k = 0; k < K; ++k) deps.push_back(static_cast<std::uint32_t>(pav[k][c]));
        std::uint32_t in = deps.front();
        if (K > 1) in = shadow_mas(Phase::moddown, c, i, static_cast<std::uint32_t>(K), 1000 + comp, deps, true);
        const auto ntt = transform(OpKind::NTT, Phase::moddown, c, i, 1000 + comp, {in});
        auto fin = acc[i];
        fin.push_back(ntt);
        shadow_mas(Phase::moddown, c, i, 2, 1000 + comp, fin);
      }
    }
  }

  // Function-specialised chiplets: 0 transforms, 1 accumulates.
  void strawman_a(int l) {
    if (r_ < 2) throw ConfigError("r: technique A needs at least 2 chiplets");
    constexpr int T = 0, M = 1;
    const int p_index = l + 1;
    std::vector<char> to_m(r_, 0), to_t(r_, 0);
    to_m[M] = 1;
    to_t[T] = 1;
    std::vector<std::vector<std::uint32_t>> acc(l + 2);
    for (int i = 0; i <= l; ++i) {
      const auto intt = transform(OpKind::INTT, Phase::modup, T, i, i, {});
      for (int j = 0; j <= l + 1; ++j) {
        const auto ntt = transform(OpKind::NTT, Phase::modup, T, j, i, {intt});
        const auto av = broadcast(T, ntt, to_m, Phase::modup, j, i);
        acc[j].push_back(shadow_mas(Phase::keymul, M, j, 2, i, {static_cast<std::uint32_t>(av[M])}));
      }
    }
    for (int comp = 0; comp < 2; ++comp) {
      MicroOp hold = base(OpKind::SYNC, Unit::none, Phase::sync, M, p_index);
      hold.deps = acc[p_index];
      const auto ready = add(hold);
      const auto at_t = broadcast(M, ready, to_t, Phase::moddown, p_index, kUrgent);
      const auto t = transform(OpKind::INTT, Phase::moddown, T, p_index, kUrgent, {static_cast<std::uint32_t>(at_t[T])});
      for (int j = 0; j <= l; ++j) {
        const auto ntt = transform(OpKind::NTT, Phase::moddown, T, j, kLate, {t});
        const auto av = broadcast(T, ntt, to_m, Phase::moddown, j, kLate);
        auto deps = acc[j];
        deps.push_back(static_cast<std::uint32_t>(av[M]));
        shadow_mas(Phase::moddown, M, j, 2, kLate, deps);
      }
    }
  }

  // One chiplet per target limb. B broadcasts INTT results, C broadcasts the
  // raw limbs and every chiplet runs its own INTTs.
  void strawman_bc(int l, bool raw) {
    const int p_index = l + 1;
    if (r_ < l + 2) throw ConfigError("r: techniques B and C need l+2 chiplets");
    std::vector<char> all(r_, 0), qs(r_, 0);
    for (int j = 0; j <= l + 1; ++j) all[j] = 1;
    for (int j = 0; j <= l; ++j) qs[j] = 1;
    std::vector<std::vector<std::uint32_t>> acc(l + 2);
    for (int i = 0; i <= l; ++i) {
      std::uint32_t data;
      if (raw) {
        MicroOp limb = base(OpKind::SYNC, Unit::none, Phase::sync, i, i);
        data = add(limb);
      } else {
        data = transform(OpKind::INTT, Phase::modup, i, i, i, {});
      }
      const auto av = broadcast(i, data, all, Phase::modup, i, i);
      for (int j = 0; j <= l + 1; ++j) {
        std::uint32_t in = static_cast<std::uint32_t>(av[j]);
        if (raw) in = transform(OpKind::INTT, Phase::modup, j, i, i, {in});
        const auto ntt = transform(OpKind::NTT, Phase::modup, j, j, i, {in});
        acc[j].push_back(shadow_mas(Phase::keymul, j, j, 2, i, {ntt}));
      }
    }
    for (int comp = 0; comp < 2; ++comp) {
      std::uint32_t out;
      if (raw) {
        MicroOp hold = base(OpKind::SYNC, Unit::none, Phase::sync, p_index, p_index);
        hold.deps = acc[p_index];
        out = add(hold);
      } else {
        out = transform(OpKind::INTT, Phase::moddown, p_index, p_index, kUrgent, acc[p_index]);
      }
      const auto av = broadcast(p_index, out, qs, Phase::moddown, p_index, kUrgent);
      for (int j = 0; j <= l; ++j) {
        std::uint32_t in = static_cast<std::uint32_t>(av[j]);
        if (raw) in = transform(OpKind::INTT, Phase::moddown, j, p_index, kUrgent, {in});
        const auto ntt = transform(OpKind::NTT, Phase::moddown, j, j, kLate, {in});
        auto deps = acc[j];
        deps.push_back(ntt);
        shadow_mas(Phase::moddown, j, j, 2, kLate, deps);
      }
    }
  }

  void rescale(int l) {
    if (l < 1) throw LevelExhausted("rescale needs level >= 1");
    std::vector<char> consumer(r_, 0);
    for (int i = 0; i < l; ++i) consumer[as_.chiplet(i)] = 1;
    for (int comp = 0; comp < 2; ++comp) {
      const int owner = as_.chiplet(l);
      const auto t = transform(OpKind::INTT, Phase::rescale, owner, l, kUrgent, {});
      const auto av = broadcast(owner, t, consumer, Phase::rescale, l, kUrgent);
      for (int i = 0; i < l; ++i) {
        const int c = as_.chiplet(i);
        const auto ntt = transform(OpKind::NTT, Phase::rescale, c, i, comp, {static_cast<std::uint32_t>(av[c])});
        shadow_mas(Phase::rescale, c, i, 1, comp, {ntt});
      }
    }
  }

  // Standalone K = 1 ModDown of both components. The fused variant also
  // drops q_l, so both INTT broadcasts share a single wait.
  void moddown_k1(int l, bool fused_rescale) {
    if (fused_rescale && l < 1) throw LevelExhausted("fused rescale needs level >= 1");
    const int p_index = as_.l_max + 1;
    const int top = fused_rescale ? l - 1 : l;
    std::vector<char> consumer(r_, 0);
    for (int i = 0; i <= top; ++i) consumer[as_.chiplet(i)] = 1;
    for (int comp = 0; comp < 2; ++comp) {
      std::vector<int> dropped{p_index};
      if (fused_rescale) dropped.push_back(l);
      std::vector<Avail> av;
      for (int d : dropped) {
        const int c = as_.chiplet(d);
        std::uint32_t t = transform(OpKind::INTT, Phase::moddown, c, d, kUrgent, {});
        if (fused_rescale) t = shadow_mas(Phase::moddown, c, d, 1, kUrgent, {t}, true);
        av.push_back(broadcast(c, t, consumer, Phase::moddown, d, kUrgent));
      }
      for (int i = 0; i <= top; ++i) {
        const int c = as_.chiplet(i);
        std::vector<std::uint32_t> deps;
        for (const auto& a : av) deps.push_back(static_cast<std::uint32_t>(a[c]));
        std::uint32_t in = deps.front();
        if (fused_rescale) in = shadow_mas(Phase::moddown, c, i, 2, comp, deps, true);
        const auto ntt = transform(OpKind::NTT, Phase::moddown, c, i, comp, {in});
        shadow_mas(Phase::moddown, c, i, 1, comp, {ntt});
      }
    }
  }
};

}  // namespace

Dag expand_program(const ChipletConfig& cfg, const Program& prog, const LimbAssignment& assign,
                   const ExpandOptions& opt, std::vector<StepInfo>* steps) {
  cfg.validate();
  if (assign.r != cfg.r) throw ConfigError("assignment.r must equal config r");
  if (prog.dnum < 1 || prog.dnum > prog.l_max + 1) throw ConfigError("dnum: must be in [1, L+1]");
  Dag dag;
  Builder b(cfg, assign, opt, prog, dag);
  for (std::uint32_t m = 0; m < prog.ops.size(); ++m) {
    const auto& op = prog.ops[m];
    if (op.l < 0 || op.l > prog.l_max) throw ConfigError("program.l: level out of range");
    b.macro(m, op);
    if (steps) {
      StepInfo s;
      s.macro = m;
      s.kind = op.kind;
      s.level = op.l;
      s.limbs_per_chiplet.assign(static_cast<std::size_t>(cfg.r), 0);
      for (int i = 0; i <= op.l; ++i) ++s.limbs_per_chiplet[assign.chiplet(i)];
      steps->push_back(std::move(s));
    }
  }
  return dag;
}

CycleReport run_workload(const ChipletConfig& cfg, const Program& prog, const LimbAssignment& assign,
                         const ExpandOptions& opt, Dag* dag_out, std::vector<Timing>* timing_out) {
  std::vector<StepInfo> steps;
  Dag dag = expand_program(cfg, prog, assign, opt, &steps);
  const auto t = run_schedule(cfg, dag);
  CycleReport rep = make_report(cfg, dag, t);
  rep.steps = std::move(steps);
  const int bound = analytic::chiplet_bound(prog.l_max, cfg.hbm_gbps * cfg.hbm_stacks / cfg.c2c_gbps);
  const bool strawman = opt.strategy == Strategy::strawman_a || opt.strategy == Strategy::strawman_b ||
                        opt.strategy == Strategy::strawman_c;
  if (!strawman && cfg.r > bound)
    rep.warnings.push_back("r = " + std::to_string(cfg.r) + " exceeds the non-blocking chiplet bound " +
                           std::to_string(bound));
  if (dag_out) *dag_out = std::move(dag);
  if (timing_out) *timing_out = t;
  return rep;
}

namespace {

LimbAssignment interleaved(const ChipletConfig& cfg, int l_max, int k = 1) {
  return {AssignMode::interleaved, cfg.r, l_max, k};
}

}  // namespace

CycleReport schedule_keyswitch_ring(const ChipletConfig& cfg, int l, int l_max, bool include_moddown) {
  Program p{l_max, l_max + 1, {{MacroKind::KEYSWITCH, l, 0}}};
  ExpandOptions opt;
  opt.include_moddown = include_moddown;
  return run_workload(cfg, p, interleaved(cfg, l_max), opt);
}

CycleReport schedule_moddown_ring(const ChipletConfig& cfg, int l, int l_max, bool fused_rescale) {
  Program p{l_max, l_max + 1, {{fused_rescale ? MacroKind::MODDOWN_RESCALE : MacroKind::MODDOWN, l, 0}}};
  return run_workload(cfg, p, interleaved(cfg, l_max));
}

CycleReport schedule_keyswitch_digits(const ChipletConfig& cfg, int l, int l_max, int dnum, Strategy strategy) {
  if (strategy != Strategy::alternate && strategy != Strategy::digitwise)
    throw ConfigError("strategy: digit flows are alternate or digitwise");
  Program p{l_max, dnum, {{MacroKind::KEYSWITCH, l, 0}}};
  ExpandOptions opt;
  opt.strategy = strategy;
  LimbAssignment as = interleaved(cfg, l_max, p.k());
  if (strategy == Strategy::digitwise) as.mode = AssignMode::digitwise;
  return run_workload(cfg, p, as, opt);
}

ChipletConfig strawman_config(const ChipletConfig& cfg, int l, Strategy technique) {
  ChipletConfig c = cfg;
  c.comm = CommModel::twice_linear;
  switch (technique) {
    case Strategy::strawman_a: c.r = 4; break;
    case Strategy::strawman_b:
    case Strategy::strawman_c: c.r = l + 2; break;
    default: throw ConfigError("technique: strawmen are A, B and C");
  }
  return c;
}

CycleReport schedule_strawman(const ChipletConfig& cfg, int l, Strategy technique) {
  const ChipletConfig c = strawman_config(cfg, l, technique);
  Program p{l, l + 1, {{MacroKind::KEYSWITCH, l, 0}}};
  ExpandOptions opt;
  opt.strategy = technique;
  return run_workload(c, p, interleaved(c, l), opt);
}

std::vector<SweepRow> sweep_chiplets(const ChipletConfig& base, const std::vector<int>& r_list, int l, int l_max) {
  std::vector<SweepRow> rows;
  for (int r : r_list) {
    ChipletConfig c = base;
    c.r = r;
    const auto rep = schedule_keyswitch_ring(c, l, l_max);
    rows.push_back({r, rep.total_cycles, rep.wall_ms, rep.wall_ms * 1e6 / (l + 1), rep.ntt_utilization});
  }
  return rows;
}

}  // namespace chipfhe::sim
