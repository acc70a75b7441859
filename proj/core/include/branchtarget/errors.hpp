#pragma once

#include <stdexcept>
#include <string>

namespace bt {

// Bad user-supplied input: malformed scenario files, invalid parameters,
// inconsistent measures.  CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerically unusable configuration (CFL violation, degenerate grid,
// x-dependent slope cone, ...).  CLI maps this to exit code 3.
struct NumericalConfigError : std::runtime_error {
    explicit NumericalConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Population blew past the configured hard cap.  CLI maps this to exit code 1.
struct ExplosionError : std::runtime_error {
    explicit ExplosionError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bt
