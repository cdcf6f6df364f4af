#pragma once

#include <stdexcept>
#include <string>

namespace qimp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QIMP_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

QIMP_DEFINE_ERROR(CapacityError);       // qubit count above the simulator cap
QIMP_DEFINE_ERROR(ValidationError);     // a value violates its type invariants
QIMP_DEFINE_ERROR(IndexError);          // qubit / element index out of range
QIMP_DEFINE_ERROR(ArgumentError);       // bad scalar argument
QIMP_DEFINE_ERROR(ZeroNormError);       // image with no nonzero pixel
QIMP_DEFINE_ERROR(DegeneratePostselectionError);
QIMP_DEFINE_ERROR(DegenerateProblemError);  // e.g. single-class training data
QIMP_DEFINE_ERROR(ShapeError);
QIMP_DEFINE_ERROR(FormatError);         // malformed file header / magic
QIMP_DEFINE_ERROR(ConsistencyError);    // files that disagree with each other
QIMP_DEFINE_ERROR(ReadError);           // I/O failure or truncated file
#undef QIMP_DEFINE_ERROR

/// Invalid experiment configuration: unknown key, unparsable value, missing
/// file or a non-positive count. Raised before any computation starts.
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

}  // namespace qimp
