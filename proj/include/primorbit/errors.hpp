#pragma once

#include <stdexcept>
#include <string>

namespace primorbit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid input at an API or parsing boundary.
struct ValidationError : Error {
    using Error::Error;
};

// A certified comparison or floor ran out of refinement budget before it
// could be decided.
struct RefinementBudgetError : Error {
    using Error::Error;
};

// An enumeration exceeded its configured size budget.
struct BudgetError : Error {
    using Error::Error;
};

// A search window contained no admissible point.
struct EmptyWindowError : Error {
    using Error::Error;
};

// No odd index j satisfies the convergent-denominator window (16-style
// selection); the caller is expected to move on to the next k.
struct NoValidIndexError : Error {
    using Error::Error;
};

// Fewer data points than an estimator needs.
struct InsufficientRecordsError : Error {
    using Error::Error;
};

} // namespace primorbit
