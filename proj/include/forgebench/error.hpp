#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forgebench {

enum class ErrorCode {
  // imaging
  InvalidImage,
  MalformedStream,
  UnsupportedFormat,
  InvalidQuality,
  IoError,
  // operators
  NegativeSigma,
  NegativeParameter,
  EvenKernel,
  NonPositiveKernel,
  NonPositiveGamma,
  OutOfRangeBeta,
  NonPositiveAlpha,
  NonPositiveAmount,
  ImageTooSmall,
  InvalidOperation,
  UnknownCategory,
  // plugins
  PluginLaunchFailure,
  PluginTimeout,
  PluginBadOutput,
  DimensionMismatch,
  FrameCountMismatch,
  InvalidCrf,
  // sdaug
  InvalidConfig,
  // harness
  ParseError,
  DuplicateId,
  UnknownLabel,
  AdapterHandshakeFailure,
  AdapterCrash,
  SampleTimeout,
  ProtocolViolation,
  AdapterError,
  // metrics
  EmptyClass,
  UnknownFormat,
};

std::string_view to_string(ErrorCode code) noexcept;

/// The single exception type thrown by the library. The code is stable and
/// machine-checkable; the message carries the human-readable context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace forgebench
