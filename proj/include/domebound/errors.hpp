#pragma once

#include <stdexcept>
#include <string>

namespace domebound {

// CLI exit codes: 0 success, 2 precondition violation,
// 3 solver non-convergence, 4 certificate failure.
enum class ExitCode : int { ok = 0, precondition = 2, solver = 3, certificate = 4 };

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Tolerance not reached within the iteration cap.  Kept distinct from a
// bracketing/setup failure so callers can tell the two apart.
class IterationLimitError : public SolverError {
public:
    using SolverError::SolverError;
};

class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline ExitCode exit_code_for(const std::exception& e) {
    if (dynamic_cast<const PreconditionError*>(&e)) return ExitCode::precondition;
    if (dynamic_cast<const SolverError*>(&e)) return ExitCode::solver;
    if (dynamic_cast<const CertificateError*>(&e)) return ExitCode::certificate;
    return ExitCode::solver;
}

} // namespace domebound
