// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nearfield::cli {

/// Runs one CLI invocation. `args` excludes the program name. Returns the
/// process exit status: 0 on success, 1 when a computation hit a domain or
/// input error, 2 on a usage error.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace nearfield::cli
