// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "islab/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return islab::run_cli(args, std::cout, std::cerr);
}
