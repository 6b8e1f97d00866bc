// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace gapmaps {

struct invalid_params : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An implicit evaluation (threshold crossing, STS step) failed to bracket
// or converge on a root.
struct solver_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A flow never reached the opposite threshold within the scan horizon;
// violates the finite-return-time requirement of a threshold system.
struct no_intersection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Curve continuation could not be started or collapsed mid-trace.
struct continuation_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct time_budget_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gapmaps
