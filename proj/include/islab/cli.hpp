// Copyright islab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace islab {

/// Runs one islab invocation. `args` excludes the program name. Reports go
/// to `out`, diagnostics to `err`. Exit codes: 0 success/pass/correct/
/// adequate, 1 failures/violations/incorrect/not-adequate, 2 usage or format
/// error, 3 statically rejected. Output is deterministic for fixed inputs.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace islab
