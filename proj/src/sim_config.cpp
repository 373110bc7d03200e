// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cmath>
#include <json.hpp>

#include "chipfhe/chipletsim.hpp"

namespace chipfhe::sim {

using nlohmann::json;

u64 ChipletConfig::poly_bytes() const { return (n() * static_cast<u64>(word_bits) + 7) / 8; }

u64 ChipletConfig::transfer_cycles() const {
  if (comm == CommModel::twice_linear) return 2 * n1;
  const double per_cycle = c2c_gbps / f_ghz;
  return static_cast<u64>(std::ceil(static_cast<double>(poly_bytes()) / per_cycle));
}

u64 ChipletConfig::hbm_cycles() const {
  const double per_cycle = hbm_gbps * hbm_stacks / f_ghz;
  return static_cast<u64>(std::ceil(static_cast<double>(poly_bytes()) / per_cycle));
}

u64 ChipletConfig::fill() const {
  if (exact) return 0;
  if (fill_cycles >= 0) return static_cast<u64>(fill_cycles);
  return static_cast<u64>(std::countr_zero(n()));
}

void ChipletConfig::validate() const {
  auto check = [](bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError(field + ": " + why);
  };
  check(n1 > 0 && std::has_single_bit(n1), "n1", "must be a power of two");
  check(n2 > 0 && std::has_single_bit(n2), "n2", "must be a power of two");
  check(f_ghz > 0, "f_ghz", "must be positive");
  check(r >= 1 && r <= 1024, "r", "must be in [1, 1024]");
  check(hbm_gbps > 0, "hbm_bw", "must be positive");
  check(hbm_stacks >= 1, "hbm_stacks", "must be at least 1");
  check(c2c_gbps > 0, "c2c_bw", "must be positive");
  check(ingress_gbps > 0, "ingress_bw", "must be positive");
  check(word_bits > 0 && word_bits <= 64, "w", "must be in [1, 64]");
}

int LimbAssignment::chiplet(int index) const {
  if (index < 0) throw ConfigError("limb index must be non-negative");
  if (index > l_max) {
    const int k_idx = index - l_max - 1;
    return (l_max + 1 + k_idx) % r;
  }
  switch (mode) {
    case AssignMode::interleaved: return index % r;
    case AssignMode::sequential: {
      const int block = (l_max + r) / r;
      return std::min(index / block, r - 1);
    }
    case AssignMode::digitwise: return (index / k) % r;
  }
  return 0;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

AssignMode parse_assign_mode(const std::string& s) {
  const std::string v = lower(s);
  if (v == "interleaved") return AssignMode::interleaved;
  if (v == "sequential") return AssignMode::sequential;
  if (v == "digitwise") return AssignMode::digitwise;
  throw ConfigError("assignment: unknown mode '" + s + "'");
}

MacroKind parse_macro(const std::string& s) {
  const std::string v = lower(s);
  if (v == "hadd") return MacroKind::HADD;
  if (v == "hmult") return MacroKind::HMULT;
  if (v == "keyswitch") return MacroKind::KEYSWITCH;
  if (v == "rotate") return MacroKind::ROTATE;
  if (v == "rescale") return MacroKind::RESCALE;
  if (v == "moddown") return MacroKind::MODDOWN;
  if (v == "moddown_rescale") return MacroKind::MODDOWN_RESCALE;
  if (v == "bootstrap_sched")
    throw UnsupportedConfig("BOOTSTRAP_SCHED is a program file of macro ops, not a single op");
  throw ConfigError("op: unknown macro op '" + s + "'");
}

Strategy parse_strategy(const std::string& s) {
  const std::string v = lower(s);
  if (v == "ring" || v == "ours") return Strategy::ring;
  if (v == "alternate") return Strategy::alternate;
  if (v == "digitwise") return Strategy::digitwise;
  if (v == "a") return Strategy::strawman_a;
  if (v == "b") return Strategy::strawman_b;
  if (v == "c") return Strategy::strawman_c;
  throw ConfigError("strategy: unknown '" + s + "'");
}

namespace {

template <class T>
void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

ChipletConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (j.contains("config")) j = j["config"];
  ChipletConfig c;
  get(j, "n1", c.n1);
  get(j, "n2", c.n2);
  get(j, "f_ghz", c.f_ghz);
  get(j, "r", c.r);
  get(j, "hbm_bw", c.hbm_gbps);
  get(j, "hbm_stacks", c.hbm_stacks);
  get(j, "c2c_bw", c.c2c_gbps);
  get(j, "ingress_bw", c.ingress_gbps);
  get(j, "w", c.word_bits);
  get(j, "fill_cycles", c.fill_cycles);
  get(j, "exact", c.exact);
  get(j, "mas_fused", c.mas_fused);
  if (j.contains("comm_model")) {
    const std::string m = j["comm_model"].get<std::string>();
    if (m == "bandwidth") c.comm = CommModel::bandwidth;
    else if (m == "twice_linear") c.comm = CommModel::twice_linear;
    else throw ConfigError("comm_model: unknown '" + m + "'");
  }
  c.validate();
  return c;
}

std::string config_to_json(const ChipletConfig& c) {
  json j = {{"n1", c.n1},
            {"n2", c.n2},
            {"f_ghz", c.f_ghz},
            {"r", c.r},
            {"hbm_bw", c.hbm_gbps},
            {"hbm_stacks", c.hbm_stacks},
            {"c2c_bw", c.c2c_gbps},
            {"ingress_bw", c.ingress_gbps},
            {"w", c.word_bits},
            {"fill_cycles", c.fill_cycles},
            {"exact", c.exact},
            {"mas_fused", c.mas_fused},
            {"comm_model", c.comm == CommModel::bandwidth ? "bandwidth" : "twice_linear"}};
  return j.dump(2);
}

Program program_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("program: ") + e.what());
  }
  Program p;
  get(j, "L", p.l_max);
  get(j, "dnum", p.dnum);
  if (p.l_max < 0) throw ConfigError("L: must be non-negative");
  if (p.dnum < 1 || p.dnum > p.l_max + 1) throw ConfigError("dnum: must be in [1, L+1]");
  if (!j.contains("program") || !j["program"].is_array()) throw ConfigError("program: missing op list");
  for (const auto& e : j["program"]) {
    MacroOp op;
    op.kind = parse_macro(e.at("op").get<std::string>());
    get(e, "l", op.l);
    get(e, "rot", op.rot);
    if (op.l < 0 || op.l > p.l_max) throw ConfigError("program.l: level out of range");
    p.ops.push_back(op);
  }
  return p;
}

}  // namespace chipfhe::sim
