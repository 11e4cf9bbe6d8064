#pragma once

#include <stdexcept>
#include <string>

namespace efimov {

// Error taxonomy shared by the library and the CLI. The CLI maps these to
// process exit codes: schema_error -> 2, numerical_guard_error -> 3,
// dimension_guard_error -> 4, io_error -> 5.

struct schema_error : std::runtime_error {
    explicit schema_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical precondition or sanity guard tripped: non-integrable evaluation
// point, nonpositive determinant under a square root, bracket failure,
// unstable fit, insufficient quadrature degree, ...
struct numerical_guard_error : std::runtime_error {
    explicit numerical_guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct dimension_guard_error : std::runtime_error {
    explicit dimension_guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace efimov
