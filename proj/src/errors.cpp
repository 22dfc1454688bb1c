#include "cnc/errors.hpp"

namespace cnc {

const char* error_kind_name(ErrorKind k) noexcept {
    switch (k) {
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::NotCyclic: return "NotCyclic";
    case ErrorKind::BadBasis: return "BadBasis";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NoCubicCharacter: return "NoCubicCharacter";
    case ErrorKind::BadModulus: return "BadModulus";
    case ErrorKind::Nonconvergence: return "Nonconvergence";
    case ErrorKind::OracleScale: return "OracleScale";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::RamifiedPrime: return "RamifiedPrime";
    case ErrorKind::BadDivisor: return "BadDivisor";
    case ErrorKind::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorKind::Budget: return "Budget";
    case ErrorKind::ZeroValueEncountered: return "ZeroValueEncountered";
    case ErrorKind::Validation: return "Validation";
    }
    return "Unknown";
}

int exit_code_for(ErrorKind k) noexcept {
    switch (k) {
    case ErrorKind::Budget:
    case ErrorKind::CapExceeded:
    case ErrorKind::OracleScale:
    case ErrorKind::Overflow:
        return 2;
    case ErrorKind::Nonconvergence:
    case ErrorKind::TruncationInsufficient:
    case ErrorKind::ZeroValueEncountered:
        return 3;
    default:
        return 1;
    }
}

} // namespace cnc
