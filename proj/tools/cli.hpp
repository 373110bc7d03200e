// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <CLI11.hpp>

namespace chipfhe::cli {

// Each registers a subcommand whose callback stores its exit status in `rc`.
void add_verify(CLI::App& app, int& rc);
void add_simulate(CLI::App& app, int& rc);
void add_sweep(CLI::App& app, int& rc);
void add_analyze(CLI::App& app, int& rc);

}  // namespace chipfhe::cli
