#include "forgebench/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

#include "forgebench/error.hpp"

extern char** environ;

namespace forgebench {
namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

bool is_executable_file(const std::filesystem::path& p) {
  struct stat st;
  return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
         ::access(p.c_str(), X_OK) == 0;
}

std::vector<std::string> split_path_list(const char* value) {
  std::vector<std::string> out;
  if (value == nullptr) return out;
  std::string cur;
  for (const char* p = value;; ++p) {
    if (*p == ':' || *p == '\0') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      if (*p == '\0') break;
    } else {
      cur.push_back(*p);
    }
  }
  return out;
}

std::vector<char*> make_argv(std::vector<std::string>& words) {
  std::vector<char*> argv;
  argv.reserve(words.size() + 1);
  for (auto& w : words) argv.push_back(w.data());
  argv.push_back(nullptr);
  return argv;
}

std::string resolve_or_throw(const std::vector<std::string>& argv) {
  if (argv.empty())
    throw Error(ErrorCode::PluginLaunchFailure, "empty command line");
  auto exe = resolve_executable(argv[0]);
  if (!exe)
    throw Error(ErrorCode::PluginLaunchFailure,
                "program not found: " + format_command(argv));
  return exe->string();
}

class SpawnActions {
 public:
  SpawnActions() { ::posix_spawn_file_actions_init(&actions_); }
  ~SpawnActions() { ::posix_spawn_file_actions_destroy(&actions_); }
  SpawnActions(const SpawnActions&) = delete;
  SpawnActions& operator=(const SpawnActions&) = delete;
  posix_spawn_file_actions_t* get() { return &actions_; }

 private:
  posix_spawn_file_actions_t actions_;
};

pid_t spawn(const std::string& exe, std::vector<std::string> words,
            SpawnActions& actions) {
  words[0] = exe;
  auto argv = make_argv(words);
  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, exe.c_str(), actions.get(), nullptr,
                               argv.data(), environ);
  if (rc != 0)
    throw Error(ErrorCode::PluginLaunchFailure,
                std::string(std::strerror(rc)) + ": " + format_command(words));
  return pid;
}

// Returns the exit code, or -1 for death by signal.
int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

}  // namespace

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (std::size_t i = 0; i < command.size(); ++i) {
    const char c = command[i];
    if (quote == '\'') {
      if (c == '\'')
        quote = 0;
      else
        cur.push_back(c);
      continue;
    }
    if (c == '\\' && i + 1 < command.size()) {
      cur.push_back(command[++i]);
      in_word = true;
      continue;
    }
    if (quote == '"') {
      if (c == '"')
        quote = 0;
      else
        cur.push_back(c);
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_word) words.push_back(std::move(cur));
      cur.clear();
      in_word = false;
      continue;
    }
    cur.push_back(c);
    in_word = true;
  }
  if (quote != 0)
    throw Error(ErrorCode::InvalidOperation,
                "unterminated quote in command: " + std::string(command));
  if (in_word) words.push_back(std::move(cur));
  return words;
}

std::vector<std::string> expand_command(
    std::string_view command_template,
    const std::map<std::string, std::string>& vars) {
  auto words = split_command(command_template);
  for (auto& word : words) {
    std::string out;
    std::size_t i = 0;
    while (i < word.size()) {
      if (word[i] == '{') {
        const auto close = word.find('}', i + 1);
        if (close != std::string::npos) {
          const std::string name = word.substr(i + 1, close - i - 1);
          const bool ident =
              !name.empty() &&
              std::all_of(name.begin(), name.end(), [](unsigned char ch) {
                return std::isalnum(ch) || ch == '_';
              });
          if (ident) {
            auto it = vars.find(name);
            if (it == vars.end())
              throw Error(ErrorCode::InvalidOperation,
                          "unbound placeholder {" + name + "} in: " +
                              std::string(command_template));
            out += it->second;
            i = close + 1;
            continue;
          }
        }
      }
      out.push_back(word[i++]);
    }
    word = std::move(out);
  }
  return words;
}

std::string format_command(const std::vector<std::string>& argv) {
  std::string out;
  for (const auto& w : argv) {
    if (!out.empty()) out.push_back(' ');
    const bool plain =
        !w.empty() && w.find_first_of(" \t\n'\"\\") == std::string::npos;
    if (plain) {
      out += w;
    } else {
      out.push_back('\'');
      for (char c : w) {
        if (c == '\'')
          out += "'\\''";
        else
          out.push_back(c);
      }
      out.push_back('\'');
    }
  }
  return out;
}

std::optional<std::filesystem::path> resolve_executable(
    const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name.find('/') != std::string::npos) {
    if (is_executable_file(name)) return std::filesystem::path(name);
    return std::nullopt;
  }
  auto dirs = split_path_list(std::getenv("FORGEBENCH_PLUGIN_PATH"));
  for (auto& d : split_path_list(std::getenv("PATH"))) dirs.push_back(d);
  for (const auto& d : dirs) {
    const auto candidate = std::filesystem::path(d) / name;
    if (is_executable_file(candidate)) return candidate;
  }
  return std::nullopt;
}

ProcessResult run_process(const std::vector<std::string>& argv,
                          std::chrono::milliseconds timeout) {
  const std::string exe = resolve_or_throw(argv);
  SpawnActions actions;
  ::posix_spawn_file_actions_addopen(actions.get(), 0, "/dev/null", O_RDONLY, 0);
  // Keep plugin chatter off our stdout, which may carry a report.
  ::posix_spawn_file_actions_adddup2(actions.get(), 2, 1);
  const pid_t pid = spawn(exe, argv, actions);

  const auto deadline = Clock::now() + timeout;
  auto poll_interval = std::chrono::milliseconds(1);
  ProcessResult result;
  for (;;) {
    int status = 0;
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      result.exit_code = decode_status(status);
      return result;
    }
    if (r < 0 && errno != EINTR) {
      result.exit_code = -1;
      return result;
    }
    if (Clock::now() >= deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      result.timed_out = true;
      return result;
    }
    std::this_thread::sleep_for(poll_interval);
    if (poll_interval < std::chrono::milliseconds(20)) poll_interval *= 2;
  }
}

ChildProcess::ChildProcess(const std::vector<std::string>& argv) {
  ignore_sigpipe();
  const std::string exe = resolve_or_throw(argv);
  command_line_ = format_command(argv);
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0)
    throw Error(ErrorCode::PluginLaunchFailure, "pipe: " + command_line_);
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::PluginLaunchFailure, "pipe: " + command_line_);
  }
  SpawnActions actions;
  ::posix_spawn_file_actions_adddup2(actions.get(), in_pipe[0], 0);
  ::posix_spawn_file_actions_adddup2(actions.get(), out_pipe[1], 1);
  try {
    pid_ = spawn(exe, argv, actions);
  } catch (...) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw;
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  stdin_fd_ = in_pipe[1];
  stdout_fd_ = out_pipe[0];
}

ChildProcess::~ChildProcess() {
  close_stdin();
  reap(std::chrono::milliseconds(500));
  if (stdout_fd_ >= 0) ::close(stdout_fd_);
}

bool ChildProcess::write_line(std::string_view line) {
  if (stdin_fd_ < 0) return false;
  std::string data(line);
  data.push_back('\n');
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(stdin_fd_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

ChildProcess::ReadStatus ChildProcess::read_line(
    std::string& line, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return ReadStatus::ok;
    }
    if (stdout_fd_ < 0) return ReadStatus::eof;
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (remaining.count() <= 0) return ReadStatus::timeout;
    pollfd pfd{stdout_fd_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      return ReadStatus::eof;
    }
    if (rc == 0) return ReadStatus::timeout;
    char chunk[65536];
    const ssize_t n = ::read(stdout_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      return ReadStatus::eof;
    }
    if (n == 0) return ReadStatus::eof;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ChildProcess::close_stdin() {
  if (stdin_fd_ >= 0) {
    ::close(stdin_fd_);
    stdin_fd_ = -1;
  }
}

void ChildProcess::kill() {
  if (pid_ > 0 && !reaped_) ::kill(pid_, SIGKILL);
}

bool ChildProcess::running() {
  if (pid_ <= 0 || reaped_) return false;
  int status = 0;
  const pid_t r = ::waitpid(pid_, &status, WNOHANG);
  if (r == pid_) {
    reaped_ = true;
    return false;
  }
  return true;
}

void ChildProcess::reap(std::chrono::milliseconds grace) {
  if (pid_ <= 0 || reaped_) return;
  const auto deadline = Clock::now() + grace;
  int status = 0;
  while (Clock::now() < deadline) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_ || (r < 0 && errno != EINTR)) {
      reaped_ = true;
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, &status, 0);
  reaped_ = true;
}

TempDir::TempDir(std::string_view prefix) {
  std::string tmpl =
      (std::filesystem::temp_directory_path() / (std::string(prefix) + "-XXXXXX"))
          .string();
  if (::mkdtemp(tmpl.data()) == nullptr)
    throw Error(ErrorCode::IoError, "mkdtemp failed for " + tmpl);
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace forgebench
