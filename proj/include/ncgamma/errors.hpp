#ifndef NCGAMMA_ERRORS_HPP
#define NCGAMMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ncgamma {

// Invalid argument or parameter outside the mathematical domain of an
// operation (non-positive shape, x on the wrong side of the support, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Gamma-function pole hit at a non-positive integer.
class PoleError : public DomainError {
public:
    explicit PoleError(const std::string& msg) : DomainError(msg) {}
};

// A series or quadrature failed to reach its tolerance within its
// iteration budget.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ncgamma

#endif
