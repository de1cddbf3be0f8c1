// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qmagic {

// Bad arguments or malformed inputs. CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem size exceeds a configured dense/contraction budget. CLI exit code 3.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solver failed to reach its tolerance. CLI exit code 4.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double last_delta)
        : std::runtime_error(msg), last_delta(last_delta) {}
    double last_delta;
};

} // namespace qmagic
