#pragma once

#include <stdexcept>
#include <string>

namespace edenca {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
class UsageError : public Error {
public:
  using Error::Error;
};

// Input data (pattern files, correspondence tables, ...) is inconsistent
// with its declared contract.
class DataError : public Error {
public:
  using Error::Error;
};

// A configured enumeration or size budget was exceeded before an answer
// could be established. Raised instead of returning a possibly wrong result.
class BudgetError : public Error {
public:
  using Error::Error;
};

} // namespace edenca
