#pragma once

#include <stdexcept>
#include <string>

namespace semidyn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration file could not be parsed; carries the 1-based line number.
struct ParseError : Error {
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

// Oracle construction rejected: accepted word set is not closed under
// concatenation within the check bound.
struct ClosureError : Error {
    using Error::Error;
};

// Oracle accepts no word at the requested bound; index undefined.
struct EmptyOracleError : Error {
    using Error::Error;
};

struct GridMismatchError : Error {
    using Error::Error;
};

struct ResourceCapError : Error {
    using Error::Error;
};

struct FormulaError : Error {
    using Error::Error;
};

}  // namespace semidyn
