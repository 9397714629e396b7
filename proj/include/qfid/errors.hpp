#pragma once

#include <stdexcept>
#include <string>

namespace qfid {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPsd : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
struct NotUnitary : Error {
  using Error::Error;
};
struct NotPure : Error {
  using Error::Error;
};
struct NotTracePreserving : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct InvalidState : Error {
  using Error::Error;
};
struct BlochVectorTooLong : Error {
  using Error::Error;
};
struct UnknownChannel : Error {
  using Error::Error;
};
struct ParameterOutOfRange : Error {
  using Error::Error;
};

// Raised by the JSON front end; carries a "field.path: message" string.
struct ParseError : Error {
  using Error::Error;
};

}  // namespace qfid
