#pragma once

#include <stdexcept>
#include <string>

namespace certlogic {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed formula text, bad structure file, schema violation, etc.
struct ParseError : Error {
    ParseError(const std::string& msg, int line, int col)
        : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line(line), col(col) {}
    int line;
    int col;
};

// Structure/proof file fails validation (distribution sum, undeclared ids, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Operation applied to a formula outside its language fragment, or to a
// structure lacking the required components.
struct LanguageError : Error {
    using Error::Error;
};

// Configured budget exceeded (tableau nodes, enumeration count).
// Always an explicit failure, never a silent wrong answer.
struct ResourceLimitError : Error {
    using Error::Error;
};

}  // namespace certlogic
