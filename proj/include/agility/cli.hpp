#pragma once

// Command-line front end.
//
//   agility compute   --matrix F [--out-dir D] [metric flags]
//   agility ingest    --alert-log F [--out F] [--attack-gens infer|all|LIST] [--tau X]
//   agility infer     --matrix F [--tau X] [--out F] [--update-matrix F]
//   agility simulate  [--config F] [scenario flags] [--count N] [--out-dir D]
//   agility oracle    (--matrix F | --random N) [metric flags]
//
// Exit codes: 0 success, 1 invalid input (every violation is printed),
// 2 usage error, 3 oracle mismatch, 4 file could not be read or written.

#include <iosfwd>

namespace agility {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitMismatch = 3;
inline constexpr int kExitIo = 4;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace agility
