#pragma once

#include <stdexcept>
#include <string>

namespace cnc {

enum class ErrorKind {
    NotIrreducible,
    NotCyclic,
    BadBasis,
    Overflow,
    NoCubicCharacter,
    BadModulus,
    Nonconvergence,
    OracleScale,
    CapExceeded,
    RamifiedPrime,
    BadDivisor,
    TruncationInsufficient,
    Budget,
    ZeroValueEncountered,
    Validation,
};

const char* error_kind_name(ErrorKind k) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Process exit code for an error kind: 1 validation, 2 budget or cap, 3 oracle failure.
int exit_code_for(ErrorKind k) noexcept;

} // namespace cnc
