#pragma once

#include <chrono>
#include <map>
#include <string>
#include <string_view>

#include "forgebench/image.hpp"

namespace forgebench {

struct PluginOptions {
  std::chrono::milliseconds timeout{std::chrono::seconds(120)};
};

/// Runs an out-of-process image transform (learned codecs, denoisers).
///
/// The input is written as PNG to a temp file; the template's {in} and {out}
/// are bound to the input and expected output paths and any other {name} to
/// params[name]. The program is executed directly, never through a shell.
/// The PNG left at {out} must have the input's dimensions.
///
/// Errors: PluginLaunchFailure (message carries the attempted command line),
/// PluginTimeout, PluginBadOutput (non-zero exit, missing or undecodable
/// output), DimensionMismatch.
ImageBuffer extern_transform(const ImageBuffer& img,
                             std::string_view command_template,
                             const std::map<std::string, std::string>& params,
                             const PluginOptions& options = {});

}  // namespace forgebench
