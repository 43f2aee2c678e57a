#pragma once

#include <stdexcept>
#include <string>

namespace addbasis {

// Root of every error the library raises. kind() is a stable category name
// used by the command-line front-end for diagnostics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

#define ADDBASIS_DEFINE_ERROR(Name, tag)                                 \
  class Name : public Error {                                            \
   public:                                                               \
    using Error::Error;                                                  \
    const char* kind() const noexcept override { return tag; }           \
  }

// Malformed or inconsistent arguments.
ADDBASIS_DEFINE_ERROR(InputError, "input");
// A query outside what a finite truncation or table can answer.
ADDBASIS_DEFINE_ERROR(RangeError, "range");
// A function evaluated outside its domain of definition.
ADDBASIS_DEFINE_ERROR(DomainError, "domain");
// Exact arithmetic would overflow the configured representation.
ADDBASIS_DEFINE_ERROR(CapacityError, "capacity");
// Work or memory budget exceeded.
ADDBASIS_DEFINE_ERROR(ResourceError, "resource");
// A numerical precondition of a check does not hold; the check refuses.
ADDBASIS_DEFINE_ERROR(PreconditionError, "precondition");

#undef ADDBASIS_DEFINE_ERROR

}  // namespace addbasis
