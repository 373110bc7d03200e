// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chipfhe/chipletsim.hpp"

namespace chipfhe::cli {

/// One reproducible simulator run.
struct ExperimentSpec {
  std::string name;
  std::string params = "paper-main";
  std::uint64_t n = 65536;
  int l_max = 30;
  int dnum = 31;
  int w = 54;
  sim::ChipletConfig config;
  sim::Strategy strategy = sim::Strategy::ring;
  sim::AssignMode assignment = sim::AssignMode::interleaved;
  sim::Program program;
  std::string report_path;
  std::string timeline_path;
  std::uint64_t seed = 1;
};

/// Relative program paths resolve against `base_dir`. Throws ConfigError
/// with a "spec.<field>" path.
ExperimentSpec parse_spec(const std::string& text, const std::string& base_dir = ".");
ExperimentSpec load_spec(const std::string& path);

/// Config actually simulated: strawmen override r and the link model.
sim::ChipletConfig effective_config(const ExperimentSpec& spec);
sim::CycleReport run_spec(const ExperimentSpec& spec, sim::Dag* dag = nullptr,
                          std::vector<sim::Timing>* timing = nullptr);

std::string read_file(const std::string& path);

}  // namespace chipfhe::cli
