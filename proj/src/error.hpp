#pragma once

#include <stdexcept>
#include <string>

namespace votkit {

/// Error categories surfaced through the C API as status codes.
enum class ErrorKind {
  InvalidArgument = 1,
  InvalidRegion,
  Format,
  Io,
  Protocol,
  Timeout,
  Crash,
  Parameter,
  Shape,
  Contract,
  InsufficientData,
  UndefinedMeasure,
  Config,
  Usage,
  Internal,
};

const char* error_kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace votkit
