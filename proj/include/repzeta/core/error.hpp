#pragma once

#include <stdexcept>
#include <string>

namespace repzeta {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad input or a violated precondition. The CLI maps these to exit code 1.
class DomainError : public Error {
public:
  using Error::Error;
};

class InputError : public DomainError {
public:
  using DomainError::DomainError;
};

/// A configured budget or cap was exceeded.
class SizeError : public DomainError {
public:
  using DomainError::DomainError;
};

/// An identity that must hold by theory failed; indicates a bug. Exit code 2.
class InternalError : public Error {
public:
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InputError(what);
}

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw InternalError(what);
}

}  // namespace repzeta
