#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chameleon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchema = 1;

/// Runs one command line (without the program name). Tables go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chameleon::cli
