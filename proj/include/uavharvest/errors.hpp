#pragma once

#include <stdexcept>
#include <string>

namespace uavh {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A numerical procedure (quadrature, series, root search) failed to reach
// its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Gil-Pelaez inversion could not certify the requested accuracy.
class InversionAccuracyError : public ConvergenceError {
public:
    explicit InversionAccuracyError(const std::string& what) : ConvergenceError(what) {}
};

// Invalid scenario configuration (parse failure or violated invariant).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace detail
}  // namespace uavh
