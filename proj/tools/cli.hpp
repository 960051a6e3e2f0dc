#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace elf::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

// Runs one command line (args excludes the program name). Primary text output goes to
// `out`, diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// RFC 4180 field: quoted when it holds a comma, quote or line break.
std::string csv_field(const std::string& s);

}  // namespace elf::cli
