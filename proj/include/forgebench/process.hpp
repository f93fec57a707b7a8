#pragma once

#include <sys/types.h>

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forgebench {

/// Splits a command line on whitespace. Single and double quotes group
/// words; backslash escapes the next character outside single quotes.
/// No shell expansion of any kind happens.
std::vector<std::string> split_command(std::string_view command);

/// Splits the template, then replaces every {name} inside each word with
/// vars[name]. A placeholder with no binding throws InvalidOperation.
std::vector<std::string> expand_command(
    std::string_view command_template,
    const std::map<std::string, std::string>& vars);

/// Renders argv for diagnostics, quoting words that contain spaces.
std::string format_command(const std::vector<std::string>& argv);

/// Resolves a program name. Names containing '/' are returned as-is when
/// executable. Otherwise the directories in FORGEBENCH_PLUGIN_PATH are
/// searched first, then PATH. Returns nullopt when nothing matches.
std::optional<std::filesystem::path> resolve_executable(
    const std::string& name);

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal or timed out
  bool timed_out = false;
};

/// Runs argv to completion with stdin from /dev/null. PluginLaunchFailure
/// when the program cannot be found or spawned; on timeout the child is
/// killed and timed_out is set.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::chrono::milliseconds timeout);

/// A child process connected by pipes to its stdin and stdout. stderr is
/// inherited. The destructor closes stdin, waits briefly, then kills.
class ChildProcess {
 public:
  explicit ChildProcess(const std::vector<std::string>& argv);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Writes line + '\n'. Returns false when the pipe is closed.
  bool write_line(std::string_view line);

  enum class ReadStatus { ok, eof, timeout };
  /// Reads one '\n'-terminated line (terminator stripped).
  ReadStatus read_line(std::string& line, std::chrono::milliseconds timeout);

  void close_stdin();
  void kill();
  bool running();
  pid_t pid() const noexcept { return pid_; }
  const std::string& command_line() const noexcept { return command_line_; }

 private:
  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  bool reaped_ = false;
  std::string buffer_;
  std::string command_line_;

  void reap(std::chrono::milliseconds grace);
};

/// Fresh directory under the system temp dir, removed recursively on
/// destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view prefix = "forgebench");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace forgebench
