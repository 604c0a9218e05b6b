#pragma once

#include <stdexcept>
#include <string>

namespace geoproof {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "domain failure" use the two intermediate
// classes below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  // Class name, used as the error code on the wire.
  virtual const char* code() const noexcept { return "Error"; }
};

// Malformed rule packs, problem files, session scripts.
class InputError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "InputError"; }
};

// Well-formed input whose processing fails (underivable conclusion, ...).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* code() const noexcept override { return "DomainError"; }
};

class SyntaxError : public InputError {
 public:
  SyntaxError(int line, int col, const std::string& msg)
      : InputError(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}

  const char* code() const noexcept override { return "SyntaxError"; }
  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

#define GEOPROOF_DEFINE_ERROR(Name, Base)                            \
  class Name : public Base {                                         \
   public:                                                           \
    using Base::Base;                                                \
    const char* code() const noexcept override { return #Name; }     \
  };

GEOPROOF_DEFINE_ERROR(ArityMismatch, InputError)
GEOPROOF_DEFINE_ERROR(KindMismatch, InputError)
GEOPROOF_DEFINE_ERROR(InvalidDeclaration, InputError)
GEOPROOF_DEFINE_ERROR(UndeclaredPredicate, InputError)
GEOPROOF_DEFINE_ERROR(UndeclaredObject, InputError)
GEOPROOF_DEFINE_ERROR(RangeRestrictionViolation, InputError)
GEOPROOF_DEFINE_ERROR(DuplicateRuleId, InputError)
GEOPROOF_DEFINE_ERROR(MissingConclusion, InputError)
GEOPROOF_DEFINE_ERROR(InvalidProblem, InputError)
GEOPROOF_DEFINE_ERROR(MalformedStatement, InputError)

GEOPROOF_DEFINE_ERROR(LimitExceeded, DomainError)
GEOPROOF_DEFINE_ERROR(ConclusionNotDerived, DomainError)
GEOPROOF_DEFINE_ERROR(NothingMissing, DomainError)
GEOPROOF_DEFINE_ERROR(CountOverflow, DomainError)

#undef GEOPROOF_DEFINE_ERROR

}  // namespace geoproof
