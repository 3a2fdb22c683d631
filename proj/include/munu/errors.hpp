#pragma once

#include <stdexcept>
#include <string>

namespace munu {

// Requested allocation exceeds the configured memory budget.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric routine could not reach the requested tolerance; carries the
// bound it did achieve.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double achieved_bound)
        : std::runtime_error(what), achieved_(achieved_bound) {}
    double achieved_bound() const noexcept { return achieved_; }

private:
    double achieved_;
};

// Division by eta(s) was requested too close to a zero of eta.
class near_zero_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace munu
