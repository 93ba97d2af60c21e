#pragma once

#include <stdexcept>
#include <string>

namespace lnc {

/// Base class of every error raised by the library. The CLI maps these to
/// exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands from different fields, invalid field orders, non-square matrices
/// and similar precondition violations.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Unreadable files.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed fixture documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Structurally well-formed networks that violate a model invariant
/// (cycles, dangling symbols, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// No coding solution exists (deficient min-cut, zero remainder, zero
/// polynomial where a nonzero one is required).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A bound was requested outside the range where it is defined.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// Work would exceed a configured guard (enumeration size, term count,
/// search space).
class TooLargeError : public Error {
 public:
  using Error::Error;
};

/// A self-check failed. Seeing one of these is a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lnc
