#pragma once

#include <iosfwd>

#include "matseg/error.hpp"

namespace matseg::cli {

/// Process exit codes; stable for scripting.
enum ExitCode : int {
    kSuccess = 0,
    kUsage = 2,
    kDataError = 3,
    kNumericalFailure = 4,
};

/// Exit code a library error maps to.
int exit_code_for(ErrorKind kind) noexcept;

/**
 * Entry point of the `matseg` tool.
 *
 *   matseg simulate    --example E --n N [--seed S] --out FILE [--truth FILE]
 *   matseg segment     FILE [config flags] [--transpose] [--out FILE] [--transformed-out FILE]
 *   matseg correlogram FILE [--m M] [--gamma RESULT] [--threshold T] [--seed S] [--out FILE]
 *   matseg replicate   --example E --n N1,N2,.. [--reps R] [config flags] [--seed S] [--threads K] [--out FILE]
 *
 * Config flags: --k0, --m, --c0, --ratio-shift, --threshold none|fixed:u,v|cv:N1.
 * Errors are reported on `err` as a one-line JSON record.
 */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace matseg::cli
