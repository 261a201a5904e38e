#pragma once

#include <stdexcept>
#include <string>

namespace cloneforge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotCoprimeError : Error {
  using Error::Error;
};
struct NotPrimePowerError : Error {
  using Error::Error;
};
struct ArityMismatchError : Error {
  using Error::Error;
};
struct ModulusMismatchError : Error {
  using Error::Error;
};
struct ElementOutOfRangeError : Error {
  using Error::Error;
};
struct IndexOutOfRangeError : Error {
  using Error::Error;
};
struct DoesNotPreserveMError : Error {
  using Error::Error;
};
struct NotCompatibleError : Error {
  using Error::Error;
};
struct UnknownNameError : Error {
  using Error::Error;
};
struct BudgetExceededError : Error {
  using Error::Error;
};
struct IncompleteError : Error {
  using Error::Error;
};
struct InfeasibleParametersError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace cloneforge
