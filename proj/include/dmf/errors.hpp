#pragma once

#include <stdexcept>
#include <string>

namespace dmf {

/// Base class for all computation errors raised by the library.
/// CLI maps these to exit code 1 with a structured error object.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const { return "Error"; }
};

#define DMF_DEFINE_ERROR(NAME)                                       \
  struct NAME : Error {                                              \
    explicit NAME(const std::string& what) : Error(what) {}          \
    const char* kind() const override { return #NAME; }              \
  }

DMF_DEFINE_ERROR(InversionOfApparentZero);
DMF_DEFINE_ERROR(ZeroDenominator);
DMF_DEFINE_ERROR(ZeroInput);
DMF_DEFINE_ERROR(InsufficientPrecision);
DMF_DEFINE_ERROR(WindowTooNarrow);
DMF_DEFINE_ERROR(CapExceeded);
DMF_DEFINE_ERROR(OracleFailure);
DMF_DEFINE_ERROR(NonStabilizing);
DMF_DEFINE_ERROR(UnsupportedEdgeExponent);
DMF_DEFINE_ERROR(UnsupportedAdmissibility);
DMF_DEFINE_ERROR(ConfigError);
DMF_DEFINE_ERROR(ParseError);

#undef DMF_DEFINE_ERROR

}  // namespace dmf
