#pragma once

#include <sys/types.h>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace votkit {

/// Whitespace-separated words; double quotes group words, backslash escapes the next character.
std::vector<std::string> split_command(std::string_view command);

/// Child process in its own process group with piped stdin/stdout and stderr sent to a log file.
/// The destructor kills the group and reaps the child if it is still running.
class ChildProcess {
 public:
  ChildProcess(const std::vector<std::string>& argv, const std::filesystem::path& workdir,
               const std::filesystem::path& stderr_log);
  ~ChildProcess();
  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Writes `line` plus a newline. Throws Crash if the child closed its input, Timeout if it stops reading.
  void write_line(std::string_view line, double timeout_s);
  /// Next line without its newline; nullopt at end of stream. Throws Timeout when no line arrives in time.
  std::optional<std::string> read_line(double timeout_s);

  /// Closes the child's stdin and waits up to `grace_s` for it to exit, killing it afterwards.
  /// Returns the exit status as reported by waitpid, or -1 if it had to be killed.
  int close(double grace_s);
  void kill();

  pid_t pid() const noexcept { return pid_; }
  bool running() const noexcept { return pid_ > 0; }

 private:
  pid_t pid_ = -1;
  int in_fd_ = -1;   // child's stdin
  int out_fd_ = -1;  // child's stdout
  std::string buffer_;
};

}  // namespace votkit
