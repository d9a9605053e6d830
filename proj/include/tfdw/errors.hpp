#pragma once

#include <stdexcept>
#include <string>

namespace tfdw {

// Invalid argument for a numerical routine (alpha/z out of range, dim mismatch, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// No evaluation branch reached the requested tolerance.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Extended-precision evaluation ran out of working precision.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// A Cramer determinant R_n is numerically singular.
struct SingularModeError : std::runtime_error {
    explicit SingularModeError(const std::string& what) : std::runtime_error(what) {}
};

// The contraction precheck failed (some per-mode ratio has modulus >= 1).
struct ContractionError : std::runtime_error {
    explicit ContractionError(const std::string& what) : std::runtime_error(what) {}
};

// An iterate coefficient became non-finite.
struct NonFiniteError : std::runtime_error {
    explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tfdw
