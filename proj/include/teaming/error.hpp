// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace teaming {

// Data errors map to CLI exit code 1, usage errors to exit code 2.
enum class ErrorClass { data, usage };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

#define TEAMING_DEFINE_ERROR(Name, Class)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorClass::Class, what) {} \
  };

TEAMING_DEFINE_ERROR(MalformedId, data)
TEAMING_DEFINE_ERROR(MissingFile, data)
TEAMING_DEFINE_ERROR(BadHeader, data)
TEAMING_DEFINE_ERROR(MalformedEdgeList, data)
TEAMING_DEFINE_ERROR(EmptyGraph, data)
TEAMING_DEFINE_ERROR(TooSmallForNormalization, data)
TEAMING_DEFINE_ERROR(SampleTooSmall, data)
TEAMING_DEFINE_ERROR(DegenerateSample, data)
TEAMING_DEFINE_ERROR(NonConvergence, data)
TEAMING_DEFINE_ERROR(MismatchedTails, data)
TEAMING_DEFINE_ERROR(InvalidPartition, data)
TEAMING_DEFINE_ERROR(InvalidCoordinate, data)
TEAMING_DEFINE_ERROR(InvalidWeightMode, usage)
TEAMING_DEFINE_ERROR(AlreadyUndirected, usage)
TEAMING_DEFINE_ERROR(InvalidArgument, usage)

#undef TEAMING_DEFINE_ERROR

}  // namespace teaming
