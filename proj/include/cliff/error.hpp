#pragma once

#include <stdexcept>
#include <string>

namespace cliff {

enum class ErrorKind {
    NonCoprime,
    ExcludedTriple,
    NonPositiveF,
    MTooSmall,
    InvalidAlpha,
    DegenerateW,
    KernelObstruction,
    DomainError,
    ResolutionError,
    NotSingularPoint,
    NoConvergence,
    OutOfBox,
    BridgeOverlap,
    DegenerateTriangles,
    SolverFailure,
    InvalidLattice,
    GenusTooSmall,
    ConfigError,
    IoError,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// CLI exit code for an error kind: 2 validation, 3 numerical, 4 I/O.
int exit_code(ErrorKind k);

}  // namespace cliff
