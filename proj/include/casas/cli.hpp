#pragma once

// Command-line front end. Every subcommand writes one JSON (or text) report to
// the output stream and diagnostics to the error stream.
//
// Exit codes: 0 every stage passed, 1 a mathematical failure with its witness
// in the report, 2 usage or parse error.

#include "casas/report.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace casas {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchema = 1;

enum ExitCode { exit_pass = 0, exit_math_failure = 1, exit_usage = 2 };

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casas
