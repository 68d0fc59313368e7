#pragma once

#include <stdexcept>
#include <string>

namespace capflp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverflowError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct EmptyInstance : Error {
  using Error::Error;
};
struct NonFiniteValue : Error {
  using Error::Error;
};
struct NotDivisible : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct InvalidPlacement : Error {
  using Error::Error;
};
struct InfeasibleCapacities : Error {
  using Error::Error;
};
struct WrongParity : Error {
  using Error::Error;
};
struct InstanceTooLarge : Error {
  using Error::Error;
};
struct PreconditionViolated : Error {
  using Error::Error;
};

}  // namespace capflp
