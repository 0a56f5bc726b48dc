#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>

#include "error.hpp"

namespace votkit {

namespace {

constexpr std::size_t kMaxLine = 1 << 20;

using Clock = std::chrono::steady_clock;

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left < 0 ? 0 : static_cast<int>(std::min<long long>(left, 1 << 30));
}

Clock::time_point deadline_after(double seconds) {
  return Clock::now() + std::chrono::microseconds(static_cast<long long>(seconds * 1e6));
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] {
    struct sigaction current {};
    if (sigaction(SIGPIPE, nullptr, &current) == 0 && current.sa_handler == SIG_DFL) signal(SIGPIPE, SIG_IGN);
  });
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

std::vector<std::string> split_command(std::string_view command) {
  std::vector<std::string> out;
  std::string cur;
  bool in_word = false, quoted = false;
  for (std::size_t i = 0; i < command.size(); ++i) {
    const char c = command[i];
    if (c == '\\' && i + 1 < command.size()) {
      cur += command[++i];
      in_word = true;
    } else if (c == '"') {
      quoted = !quoted;
      in_word = true;
    } else if (!quoted && (c == ' ' || c == '\t')) {
      if (in_word) out.push_back(cur);
      cur.clear();
      in_word = false;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (quoted) raise(ErrorKind::InvalidArgument, "unterminated quote in command '" + std::string(command) + "'");
  if (in_word) out.push_back(cur);
  return out;
}

ChildProcess::ChildProcess(const std::vector<std::string>& argv, const std::filesystem::path& workdir,
                           const std::filesystem::path& stderr_log) {
  if (argv.empty()) raise(ErrorKind::InvalidArgument, "empty tracker command");
  ignore_sigpipe();

  int to_child[2], from_child[2], exec_status[2];
  if (pipe2(to_child, O_CLOEXEC) != 0) raise(ErrorKind::Io, "pipe: " + std::string(std::strerror(errno)));
  if (pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]), ::close(to_child[1]);
    raise(ErrorKind::Io, "pipe: " + std::string(std::strerror(errno)));
  }
  if (pipe2(exec_status, O_CLOEXEC) != 0) {
    ::close(to_child[0]), ::close(to_child[1]), ::close(from_child[0]), ::close(from_child[1]);
    raise(ErrorKind::Io, "pipe: " + std::string(std::strerror(errno)));
  }
  const std::string log = stderr_log.empty() ? std::string("/dev/null") : stderr_log.string();
  const int err_fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (err_fd < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1], exec_status[0], exec_status[1]}) ::close(fd);
    raise(ErrorKind::Io, "cannot open log " + log + ": " + std::strerror(errno));
  }

  // Everything the child touches is prepared before fork.
  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  const std::string dir = workdir.empty() ? std::string() : workdir.string();

  const pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1], exec_status[0], exec_status[1], err_fd})
      ::close(fd);
    raise(ErrorKind::Io, "fork: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    setpgid(0, 0);
    signal(SIGPIPE, SIG_DFL);
    int code = 0;
    if (dup2(to_child[0], 0) < 0 || dup2(from_child[1], 1) < 0 || dup2(err_fd, 2) < 0) code = errno;
    if (code == 0 && !dir.empty() && chdir(dir.c_str()) != 0) code = errno;
    if (code == 0) {
      execvp(cargv[0], cargv.data());
      code = errno;
    }
    [[maybe_unused]] auto w = write(exec_status[1], &code, sizeof code);
    _exit(127);
  }
  setpgid(pid, pid);  // also from the parent, to close the race with kill()
  ::close(to_child[0]);
  ::close(from_child[1]);
  ::close(exec_status[1]);
  ::close(err_fd);
  pid_ = pid;
  in_fd_ = to_child[1];
  out_fd_ = from_child[0];

  int code = 0;
  ssize_t got;
  do {
    got = read(exec_status[0], &code, sizeof code);
  } while (got < 0 && errno == EINTR);
  ::close(exec_status[0]);
  if (got == static_cast<ssize_t>(sizeof code)) {
    kill();
    raise(ErrorKind::Crash, "cannot start '" + argv[0] + "': " + std::strerror(code));
  }
}

ChildProcess::~ChildProcess() { kill(); }

void ChildProcess::write_line(std::string_view line, double timeout_s) {
  if (in_fd_ < 0) raise(ErrorKind::Crash, "tracker input already closed");
  std::string data(line);
  data += '\n';
  const auto deadline = deadline_after(timeout_s);
  std::size_t done = 0;
  while (done < data.size()) {
    pollfd p{in_fd_, POLLOUT, 0};
    const int r = poll(&p, 1, remaining_ms(deadline));
    if (r < 0) {
      if (errno == EINTR) continue;
      raise(ErrorKind::Io, "poll: " + std::string(std::strerror(errno)));
    }
    if (r == 0) raise(ErrorKind::Timeout, "tracker did not accept input in time");
    const ssize_t w = ::write(in_fd_, data.data() + done, data.size() - done);
    if (w < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      if (errno == EPIPE) raise(ErrorKind::Crash, "tracker closed its input");
      raise(ErrorKind::Io, "write: " + std::string(std::strerror(errno)));
    }
    done += static_cast<std::size_t>(w);
  }
}

std::optional<std::string> ChildProcess::read_line(double timeout_s) {
  const auto deadline = deadline_after(timeout_s);
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    if (buffer_.size() > kMaxLine) raise(ErrorKind::Protocol, "tracker line exceeds 1 MiB");
    if (out_fd_ < 0) return std::nullopt;
    pollfd p{out_fd_, POLLIN, 0};
    const int r = poll(&p, 1, remaining_ms(deadline));
    if (r < 0) {
      if (errno == EINTR) continue;
      raise(ErrorKind::Io, "poll: " + std::string(std::strerror(errno)));
    }
    if (r == 0) raise(ErrorKind::Timeout, "no reply within " + std::to_string(timeout_s) + " s");
    char chunk[4096];
    const ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      raise(ErrorKind::Io, "read: " + std::string(std::strerror(errno)));
    }
    if (n == 0) {
      close_fd(out_fd_);
      if (buffer_.empty()) return std::nullopt;
      raise(ErrorKind::Protocol, "unterminated final line from tracker");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

int ChildProcess::close(double grace_s) {
  close_fd(in_fd_);
  if (pid_ <= 0) return -1;
  const auto deadline = deadline_after(grace_s);
  while (true) {
    int status = 0;
    const pid_t r = waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      // Stray grandchildren in the group go too.
      ::kill(-pid_, SIGKILL);
      pid_ = -1;
      close_fd(out_fd_);
      return status;
    }
    if (r < 0 && errno != EINTR) {
      pid_ = -1;
      close_fd(out_fd_);
      return -1;
    }
    if (Clock::now() >= deadline) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  kill();
  return -1;
}

void ChildProcess::kill() {
  close_fd(in_fd_);
  close_fd(out_fd_);
  if (pid_ <= 0) return;
  ::kill(-pid_, SIGKILL);
  ::kill(pid_, SIGKILL);
  int status = 0;
  while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
  }
  pid_ = -1;
}

}  // namespace votkit
