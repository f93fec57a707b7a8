#include "forgebench/error.hpp"

namespace forgebench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::MalformedStream: return "MalformedStream";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InvalidQuality: return "InvalidQuality";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NegativeSigma: return "NegativeSigma";
    case ErrorCode::NegativeParameter: return "NegativeParameter";
    case ErrorCode::EvenKernel: return "EvenKernel";
    case ErrorCode::NonPositiveKernel: return "NonPositiveKernel";
    case ErrorCode::NonPositiveGamma: return "NonPositiveGamma";
    case ErrorCode::OutOfRangeBeta: return "OutOfRangeBeta";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::NonPositiveAmount: return "NonPositiveAmount";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::InvalidOperation: return "InvalidOperation";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::PluginLaunchFailure: return "PluginLaunchFailure";
    case ErrorCode::PluginTimeout: return "PluginTimeout";
    case ErrorCode::PluginBadOutput: return "PluginBadOutput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FrameCountMismatch: return "FrameCountMismatch";
    case ErrorCode::InvalidCrf: return "InvalidCrf";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::AdapterHandshakeFailure: return "AdapterHandshakeFailure";
    case ErrorCode::AdapterCrash: return "AdapterCrash";
    case ErrorCode::SampleTimeout: return "SampleTimeout";
    case ErrorCode::ProtocolViolation: return "ProtocolViolation";
    case ErrorCode::AdapterError: return "AdapterError";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
  }
  return "Unknown";
}

}  // namespace forgebench
