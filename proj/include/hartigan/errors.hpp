#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hartigan {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structural invariant was violated (empty cluster, bad assignment, ...).
struct InvariantViolation : Error {
    using Error::Error;
};

// A scripted move could not be applied: either the point was not in the
// stated source cluster, or the exact gain was not positive.
struct ScriptInvalid : Error {
    ScriptInvalid(std::size_t index, std::string gain, const std::string& what)
        : Error(what), move_index(index), gain_text(std::move(gain)) {}
    std::size_t move_index;
    std::string gain_text;  // "num/den" in exact mode, decimal in float mode
};

// Input file could not be parsed; line/column are 1-based.
struct ParseError : Error {
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(what), line(line), column(column) {}
    std::size_t line;
    std::size_t column;
};

// Mutually inconsistent run configuration (CLI exit code 65).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace hartigan
