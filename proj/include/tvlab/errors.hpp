#pragma once

#include <stdexcept>
#include <string>

namespace tvlab {

enum class Err {
  DimensionMismatch,
  UnsupportedVariant,
  NotInSet,
  BadArgument,
  MissingData,
  IntersectionUnavailable,
  InsufficientData,
  ParseError,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DimensionMismatch: return "dimension-mismatch";
    case Err::UnsupportedVariant: return "unsupported-variant";
    case Err::NotInSet: return "not-in-set";
    case Err::BadArgument: return "bad-argument";
    case Err::MissingData: return "missing-data";
    case Err::IntersectionUnavailable: return "intersection-unavailable";
    case Err::InsufficientData: return "insufficient-data";
    case Err::ParseError: return "parse-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace tvlab
