#pragma once

#include <stdexcept>
#include <string>

namespace pktilt {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An iterative or adaptive scheme failed to reach its tolerance.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A signed sum lost too many significant digits to be trusted.
class CancellationError : public std::runtime_error {
public:
    CancellationError(const std::string& what, double digits_lost)
        : std::runtime_error(what), digits_lost_(digits_lost) {}

    double digits_lost() const noexcept { return digits_lost_; }

private:
    double digits_lost_;
};

}  // namespace pktilt
