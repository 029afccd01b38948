#pragma once

#include <stdexcept>
#include <string>

namespace gms {

// Input data failed validation (bad distribution, malformed instance file, ...).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller passed arguments outside an operation's documented domain.
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A configured cap was exceeded (enumeration size, cut budget, ...). CLI exit code 3.
struct ResourceLimitError : std::runtime_error {
    explicit ResourceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

// No feasible solution exists for the request. CLI exit code 4.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal invariant failed; indicates a bug upstream, not bad user input.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace gms
