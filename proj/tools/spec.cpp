// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include "spec.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "chipfhe/error.hpp"

namespace chipfhe::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

void apply_params(ExperimentSpec& s, const json& p) {
  if (p.is_string()) {
    const auto name = p.get<std::string>();
    if (name == "paper-main") {
      s.n = 65536, s.l_max = 30, s.dnum = 31, s.w = 54;
    } else if (name == "toy") {
      s.n = 4096, s.l_max = 8, s.dnum = 3, s.w = 40;
    } else {
      throw ConfigError("spec.params: unknown preset '" + name + "'");
    }
    s.params = name;
    return;
  }
  if (!p.is_object()) throw ConfigError("spec.params: expected a preset name or an object");
  s.params = "explicit";
  s.n = p.value("N", s.n);
  s.l_max = p.value("L", s.l_max);
  s.dnum = p.value("dnum", s.dnum);
  s.w = p.value("w", s.w);
  if (s.l_max < 0) throw ConfigError("spec.params.L: must be non-negative");
  if (s.dnum < 1 || s.dnum > s.l_max + 1) throw ConfigError("spec.params.dnum: must be in [1, L+1]");
}

sim::Program parse_program(const ExperimentSpec& s, const json& p, const std::string& base_dir) {
  if (p.is_string()) {
    fs::path path = p.get<std::string>();
    if (path.is_relative()) path = fs::path(base_dir) / path;
    if (!fs::exists(path)) throw ConfigError("spec.program: file '" + path.string() + "' does not exist");
    sim::Program prog = sim::program_from_json(read_file(path.string()));
    if (prog.l_max != s.l_max) throw ConfigError("spec.program.L: does not match params");
    return prog;
  }
  if (!p.is_array()) throw ConfigError("spec.program: expected a path or an op list");
  json wrapped = {{"L", s.l_max}, {"dnum", s.dnum}, {"program", p}};
  return sim::program_from_json(wrapped.dump());
}

}  // namespace

ExperimentSpec parse_spec(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("spec: ") + e.what());
  }
  ExperimentSpec s;
  try {
    s.name = j.value("name", std::string{});
    s.seed = j.value("seed", s.seed);
    if (j.contains("params")) apply_params(s, j["params"]);
    const json cfg = j.value("config", json::object());
    try {
      s.config = sim::config_from_json(cfg.dump());
    } catch (const ConfigError& e) {
      std::string what = e.what();
      const std::string prefix = "ConfigError: ";
      if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
      throw ConfigError("spec.config." + what);
    }
    if (!cfg.contains("w")) s.config.word_bits = s.w;
    if (!cfg.contains("n1")) s.config.n1 = s.n / s.config.n2;
    if (s.config.n() != s.n) throw ConfigError("spec.config: n1 * n2 must equal N = " + std::to_string(s.n));
    if (j.contains("strategy")) s.strategy = sim::parse_strategy(j["strategy"].get<std::string>());
    if (j.contains("assignment")) s.assignment = sim::parse_assign_mode(j["assignment"].get<std::string>());
    if (j.contains("program")) {
      s.program = parse_program(s, j["program"], base_dir);
    } else {
      s.program = {s.l_max, s.dnum, {{sim::MacroKind::KEYSWITCH, s.l_max, 0}}};
    }
    s.report_path = j.value("report", std::string{});
    s.timeline_path = j.value("timeline", std::string{});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("spec: ") + e.what());
  }
  return s;
}

ExperimentSpec load_spec(const std::string& path) {
  return parse_spec(read_file(path), fs::path(path).parent_path().string());
}

namespace {

bool is_strawman(sim::Strategy s) {
  return s == sim::Strategy::strawman_a || s == sim::Strategy::strawman_b || s == sim::Strategy::strawman_c;
}

}  // namespace

sim::ChipletConfig effective_config(const ExperimentSpec& spec) {
  if (!is_strawman(spec.strategy)) return spec.config;
  return sim::strawman_config(spec.config, spec.program.l_max, spec.strategy);
}

sim::CycleReport run_spec(const ExperimentSpec& spec, sim::Dag* dag, std::vector<sim::Timing>* timing) {
  const sim::ChipletConfig cfg = effective_config(spec);
  sim::LimbAssignment as{spec.assignment, cfg.r, spec.program.l_max, spec.program.k()};
  if (spec.strategy == sim::Strategy::digitwise) as.mode = sim::AssignMode::digitwise;
  sim::ExpandOptions opt;
  opt.strategy = spec.strategy;
  return sim::run_workload(cfg, spec.program, as, opt, dag, timing);
}

}  // namespace chipfhe::cli
