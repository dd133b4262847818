#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace matseg {

enum class ErrorKind {
    InvalidInput,
    InvalidState,
    NumericalFailure,
    DegenerateCovariance,
    DegenerateColumn,
    DegenerateVariance,
    ResourceLimit,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library exception. Every failure the library reports carries a kind so
/// callers (the CLI in particular) can map it to a stable exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// 1-based line number for parse errors, 0 otherwise.
    std::size_t line() const noexcept { return line_; }

    static Error invalid_input(const std::string& message) {
        return Error(ErrorKind::InvalidInput, message);
    }
    static Error parse(std::size_t line, const std::string& reason) {
        Error e(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + reason);
        e.line_ = line;
        return e;
    }
    static Error degenerate_column(std::size_t column) {
        return Error(ErrorKind::DegenerateColumn,
                     "column " + std::to_string(column + 1) + " has zero variance");
    }
    static Error degenerate_variance(std::size_t component, std::size_t row) {
        return Error(ErrorKind::DegenerateVariance,
                     "transformed column " + std::to_string(component + 1) + " has non-positive variance in row " +
                         std::to_string(row + 1));
    }

    /// Same kind and line, message prefixed with the file it came from.
    static Error in_file(const std::string& file, const Error& inner) {
        Error e(inner.kind(), file + ": " + inner.what());
        e.line_ = inner.line_;
        return e;
    }

private:
    ErrorKind kind_;
    std::size_t line_ = 0;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw Error::invalid_input(message);
}

}  // namespace matseg
