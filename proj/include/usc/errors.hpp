#pragma once

#include <stdexcept>
#include <string>

namespace usc {

/// Invalid run configuration or parameter set. `key()` names the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string &what)
        : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Numerical failure: singular systems, non-convergence, invariant violations.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace usc
