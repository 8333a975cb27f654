#pragma once

#include <stdexcept>
#include <string>

namespace beircast {

// Bad flags, bad config keys, bad subcommand usage. CLI exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable/malformed/stale input data. CLI exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-convergence, rank deficiency, degenerate inputs. CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace beircast
