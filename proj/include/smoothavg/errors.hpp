#pragma once

#include <stdexcept>
#include <string>

namespace smoothavg {

/// Caller supplied arguments outside an operation's domain (beta <= 1/2, k < 1, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mathematically meaningless input, e.g. a kernel with zero mass.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure stopped before reaching its target accuracy.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace smoothavg
