#pragma once

#include <stdexcept>
#include <string>

namespace wpk {

enum class ErrorKind {
  Sizing,
  GridMismatch,
  FrequencyRange,
  Resolution,
  DegenerateInput,
  Parameter,
  UnsupportedInput,
  Io,
  Numerical,
};

const char* to_string(ErrorKind kind);

/// Base class for all errors raised by the toolkit. The kind lets callers
/// (the CLI in particular) map failures onto exit codes and skip reasons.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define WPK_DEFINE_ERROR(Name, Kind)                                  \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  }

WPK_DEFINE_ERROR(SizingError, Sizing);
WPK_DEFINE_ERROR(GridMismatchError, GridMismatch);
WPK_DEFINE_ERROR(FrequencyRangeError, FrequencyRange);
WPK_DEFINE_ERROR(ResolutionError, Resolution);
WPK_DEFINE_ERROR(DegenerateInputError, DegenerateInput);
WPK_DEFINE_ERROR(ParameterError, Parameter);
WPK_DEFINE_ERROR(UnsupportedInputError, UnsupportedInput);
WPK_DEFINE_ERROR(IoError, Io);
WPK_DEFINE_ERROR(NumericalError, Numerical);

#undef WPK_DEFINE_ERROR

}  // namespace wpk
