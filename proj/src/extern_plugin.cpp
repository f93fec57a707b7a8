#include "forgebench/extern_plugin.hpp"

#include <filesystem>

#include "forgebench/codec.hpp"
#include "forgebench/error.hpp"
#include "forgebench/process.hpp"

namespace forgebench {

ImageBuffer extern_transform(const ImageBuffer& img,
                             std::string_view command_template,
                             const std::map<std::string, std::string>& params,
                             const PluginOptions& options) {
  require_valid(img);
  if (command_template.find("{in}") == std::string_view::npos ||
      command_template.find("{out}") == std::string_view::npos)
    throw Error(ErrorCode::InvalidOperation,
                "plugin template needs {in} and {out}: " +
                    std::string(command_template));

  TempDir tmp("forgebench-plugin");
  const auto in_path = tmp.path() / "in.png";
  const auto out_path = tmp.path() / "out.png";
  write_png(in_path, img);

  auto vars = params;
  vars["in"] = in_path.string();
  vars["out"] = out_path.string();
  const auto argv = expand_command(command_template, vars);
  const std::string cmdline = format_command(argv);

  const ProcessResult result = run_process(argv, options.timeout);
  if (result.timed_out)
    throw Error(ErrorCode::PluginTimeout,
                "no result after " + std::to_string(options.timeout.count()) +
                    " ms: " + cmdline);
  if (result.exit_code != 0)
    throw Error(ErrorCode::PluginBadOutput,
                "exit status " + std::to_string(result.exit_code) + ": " +
                    cmdline);
  if (!std::filesystem::exists(out_path))
    throw Error(ErrorCode::PluginBadOutput, "no output written: " + cmdline);

  ImageBuffer out;
  try {
    out = read_image(out_path);
  } catch (const Error& e) {
    throw Error(ErrorCode::PluginBadOutput,
                std::string(e.what()) + " (from " + cmdline + ")");
  }
  if (!out.same_shape(img))
    throw Error(ErrorCode::DimensionMismatch,
                "plugin returned " + std::to_string(out.width()) + "x" +
                    std::to_string(out.height()) + " for " +
                    std::to_string(img.width()) + "x" +
                    std::to_string(img.height()) + " input: " + cmdline);
  return out;
}

}  // namespace forgebench
