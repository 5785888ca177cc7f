// errors.hpp — Exception taxonomy shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace dressim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument violates an operation's stated precondition.
class ContractViolation : public Error {
public:
    using Error::Error;
};

// Requested Hilbert-space dimension exceeds the configured cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Bad configuration input; carries the offending config key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// A numerical routine failed (eigensolver non-convergence, singular solve, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace dressim
