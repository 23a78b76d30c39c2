#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l2approx {

// Coarse classification used by the CLI to pick an exit status.
enum class ErrorClass {
  input,      // malformed files, missing profiles, invalid towers (exit 2)
  violation,  // a checked theorem or invariant failed (exit 3)
  resource,   // a configured cap was hit (exit 4)
  numeric,    // numeric engine refused the input
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

  // Level index that produced the error, or -1 when not tied to a level.
  long level() const noexcept { return level_; }
  void set_level(long level) noexcept { level_ = level; }

 private:
  ErrorClass cls_;
  long level_ = -1;
};

#define L2APPROX_DEFINE_ERROR(Name, Class)                                  \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorClass::Class, #Name ": " + what) {} \
  };

L2APPROX_DEFINE_ERROR(SupportOverflow, resource)
L2APPROX_DEFINE_ERROR(EnumerationOverflow, resource)
L2APPROX_DEFINE_ERROR(ImageTooLarge, resource)
L2APPROX_DEFINE_ERROR(DegreeCap, resource)
L2APPROX_DEFINE_ERROR(ResourceCap, resource)
L2APPROX_DEFINE_ERROR(NotNormal, input)
L2APPROX_DEFINE_ERROR(NotAComplex, input)
L2APPROX_DEFINE_ERROR(InvalidTower, input)
L2APPROX_DEFINE_ERROR(ProfileMissing, input)
L2APPROX_DEFINE_ERROR(InvalidArgument, input)
L2APPROX_DEFINE_ERROR(NotHermitian, numeric)
L2APPROX_DEFINE_ERROR(ShiftSingular, numeric)
L2APPROX_DEFINE_ERROR(GridTooCoarse, numeric)
L2APPROX_DEFINE_ERROR(NoStabilization, numeric)
L2APPROX_DEFINE_ERROR(Inconclusive, numeric)
L2APPROX_DEFINE_ERROR(HypothesisFailed, violation)
L2APPROX_DEFINE_ERROR(TheoremViolation, violation)

#undef L2APPROX_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorClass::input, "ParseError at " + std::to_string(line) + ":" +
                                     std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace l2approx
