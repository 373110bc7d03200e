// Copyright (C) 2026 chipfhe contributors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "chipfhe/error.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"chipfhe: CKKS kernels, chiplet KeySwitch simulator and analytic models"};
  app.require_subcommand(1);
  int rc = 0;
  chipfhe::cli::add_verify(app, rc);
  chipfhe::cli::add_simulate(app, rc);
  chipfhe::cli::add_sweep(app, rc);
  chipfhe::cli::add_analyze(app, rc);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const chipfhe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
