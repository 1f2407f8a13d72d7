#pragma once

#include <stdexcept>

namespace lpn {

/// An example or query budget ran out before the computation finished.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A finite example stream has no more examples.
class StreamExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lpn
