#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace uframe::cli {

/// Runs one subcommand. Machine-readable JSON (or SVG for `plot`) goes to
/// `out`; diagnostics go to `err` as single-line JSON. Exit codes: 0 ok,
/// 1 certification failure, 2 I/O, format or usage errors, 3 dimension
/// errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uframe::cli
