#pragma once

#include <stdexcept>
#include <string>

namespace qce {

// Arrangement passed to an operation expecting the other kind.
struct WrongKindError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A prior density is zero or negative somewhere on the grid.
struct NonpositivePriorError : std::domain_error {
    using std::domain_error::domain_error;
};

// A joint density whose conditional does not match the Born-rule kernel.
struct IncompatibleDensityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Constraint target outside the representable open interval (-1, 1).
struct TargetOutOfRangeError : std::domain_error {
    using std::domain_error::domain_error;
};

// Root bracketing or refinement failed.
struct NoConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qce
