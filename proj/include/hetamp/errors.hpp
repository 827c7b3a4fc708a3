#pragma once

#include <stdexcept>
#include <string>

namespace hetamp {

// Configuration / argument errors: bad dims, invalid gains, malformed input.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Truncated Fock space cannot represent the request (tail mass, degree).
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid or sampling resolution insufficient for the requested tolerance.
class ResolutionError : public std::runtime_error {
public:
    explicit ResolutionError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hetamp
