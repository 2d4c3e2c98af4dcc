#pragma once

#include <stdexcept>
#include <string>

namespace fordspine {

enum class ErrorKind {
    InvalidArgument,
    OutOfDisk,
    Inconsistency,
    EnumerationDiverged,
    IncompleteOrbit,
    CutoffTooCoarse,
    PairingFailure,
    CongruenceFailure,
    GluingInconsistency,
    GeometryInconsistency,
    MalformedComplex,
    Normalization,
    Ambiguity,
    ValidationFailed,
    PropertyViolation,
    Parse,
    Internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace fordspine
