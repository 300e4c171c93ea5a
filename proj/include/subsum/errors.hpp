#pragma once

#include <stdexcept>
#include <string>

namespace subsum {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument outside the documented range of an operation (e.g. element index >= N).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A mathematically meaningless request (non-prime modulus, 0 in B, k > N for subsets, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The request is well-posed but exceeds an enumeration or representation gate.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Not enough inputs supplied (e.g. a missing moment for a remainder bound).
class ArityError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace subsum
