#pragma once

#include <stdexcept>
#include <string>

namespace ivf {

// Base class for every error raised by this library. `kind()` is a stable
// machine-readable tag used by the CLI's errors.json.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define IVF_DEFINE_ERROR(Name)                           \
  class Name : public Error {                            \
   public:                                               \
    explicit Name(const std::string& message)            \
        : Error(#Name, message) {}                       \
  }

IVF_DEFINE_ERROR(DimensionMismatch);
IVF_DEFINE_ERROR(NonPositiveDepth);
IVF_DEFINE_ERROR(InsufficientPoints);
IVF_DEFINE_ERROR(EmptyMask);
IVF_DEFINE_ERROR(EmptyModel);
IVF_DEFINE_ERROR(InvalidNoiseSpec);
IVF_DEFINE_ERROR(StepSizeOutOfRange);
IVF_DEFINE_ERROR(OracleShapeMismatch);
IVF_DEFINE_ERROR(NoConsensus);
IVF_DEFINE_ERROR(DegenerateField);
IVF_DEFINE_ERROR(DegenerateConfiguration);
IVF_DEFINE_ERROR(NoConvergence);
IVF_DEFINE_ERROR(SamplingExhausted);
IVF_DEFINE_ERROR(UnsupportedFormat);
IVF_DEFINE_ERROR(InvalidSpec);
IVF_DEFINE_ERROR(InvalidRotation);
IVF_DEFINE_ERROR(IoError);
IVF_DEFINE_ERROR(UsageError);

#undef IVF_DEFINE_ERROR

}  // namespace ivf
