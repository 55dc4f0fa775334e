#pragma once

#include <stdexcept>
#include <string>

namespace edpm {

// Raised for arguments outside an operation's domain (alpha outside (0,1),
// weights off the simplex, empty sample sets, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A criterion could not be evaluated on a distribution; the message names
// the violated constraint of the criterion's composition.
class CriterionDomainError : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace edpm
