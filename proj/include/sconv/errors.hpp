#pragma once

#include <stdexcept>
#include <string>

namespace sconv {

/// A documented precondition of an operation was violated.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the mathematical domain (e.g. omega not in (0,1)).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested quantity is not defined or not computable for this model.
class UnsupportedQuery : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A numerical result was not finite where a finite value is required.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ExtractionStalled : public std::runtime_error {
public:
    ExtractionStalled(int k, const std::string& what) : std::runtime_error(what), k_(k) {}
    int stalled_at() const noexcept { return k_; }

private:
    int k_;
};

}  // namespace sconv
