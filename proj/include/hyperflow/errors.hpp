#pragma once

#include <stdexcept>
#include <string>

namespace hyperflow {

// Broad error classes; the CLI maps each to an exit code.
enum class ErrorKind { Input, Validation, Singularity, Drift };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), kind_(kind), code_(std::move(code)), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string code_;
    std::string detail_;
};

inline Error input_error(const std::string& what) { return {ErrorKind::Input, "InputError", what}; }
inline Error degenerate_config(const std::string& what) { return {ErrorKind::Validation, "DegenerateConfig", what}; }
inline Error ordering_violation(const std::string& what) { return {ErrorKind::Validation, "OrderingViolation", what}; }
inline Error path_too_close(const std::string& what) { return {ErrorKind::Singularity, "PathTooClose", what}; }
inline Error no_convergence(const std::string& what) { return {ErrorKind::Singularity, "NoConvergence", what}; }
inline Error singular_period_matrix(const std::string& what) { return {ErrorKind::Singularity, "SingularPeriodMatrix", what}; }
inline Error vanishing_omega_at_u(const std::string& what) { return {ErrorKind::Singularity, "VanishingOmegaAtU", what}; }
inline Error singular_locus(const std::string& what) { return {ErrorKind::Singularity, "SingularLocus", what}; }
inline Error singular_jacobian(const std::string& what) { return {ErrorKind::Singularity, "SingularJacobian", what}; }
inline Error no_progress(const std::string& what) { return {ErrorKind::Singularity, "NoProgress", what}; }
inline Error root_localization_failed(const std::string& what) { return {ErrorKind::Singularity, "RootLocalizationFailed", what}; }
inline Error lattice_point(const std::string& what) { return {ErrorKind::Singularity, "LatticePoint", what}; }
inline Error drift_exceeded(const std::string& what) { return {ErrorKind::Drift, "DriftExceeded", what}; }

inline int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::Input: return 2;
    case ErrorKind::Validation: return 3;
    case ErrorKind::Singularity: return 4;
    case ErrorKind::Drift: return 5;
    }
    return 1;
}

}  // namespace hyperflow
