#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

/// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad labels, bad configuration files, missing observables.
struct config_error : error {
    using error::error;
};

/// Operator/state defined on mismatched spaces.
struct dimension_error : error {
    using error::error;
};

/// Attempt to normalize a (near-)zero vector.
struct degenerate_state_error : error {
    using error::error;
};

/// Non-finite amplitudes, trace drift, norm underflow.
struct numeric_error : error {
    using error::error;
};

/// Internal contract violated (e.g. jump triggered with zero decay weight).
struct engine_logic_error : error {
    using error::error;
};

} // namespace cascade
