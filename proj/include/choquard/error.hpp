#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the documented domain of an operation (bad exponent, grid, sector...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// An iterative method failed to converge or produced a non-finite state.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Malformed or unreadable file.
class FormatError : public Error {
public:
  using Error::Error;
};

}  // namespace choquard
