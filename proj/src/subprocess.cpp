#include "hflz/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "hflz/error.hpp"

namespace hflz {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

std::string instantiate_command(std::string_view templ, const std::string& path) {
  std::string out(templ);
  const std::string placeholder = "{file}";
  auto pos = out.find(placeholder);
  if (pos == std::string::npos) return out + " " + shell_quote(path);
  while (pos != std::string::npos) {
    std::string quoted = shell_quote(path);
    out.replace(pos, placeholder.size(), quoted);
    pos = out.find(placeholder, pos + quoted.size());
  }
  return out;
}

TempFile::TempFile(std::string_view contents, std::string_view suffix) {
  std::string templ = (std::filesystem::temp_directory_path() / "hflz-XXXXXX").string() + std::string(suffix);
  int fd = ::mkstemps(templ.data(), static_cast<int>(suffix.size()));
  if (fd < 0) throw Error("cannot create temporary file: " + std::string(std::strerror(errno)));
  path_ = templ;
  std::size_t done = 0;
  while (done < contents.size()) {
    ssize_t n = ::write(fd, contents.data() + done, contents.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw Error("cannot write temporary file: " + std::string(std::strerror(errno)));
    }
    done += static_cast<std::size_t>(n);
  }
  ::close(fd);
}

TempFile::~TempFile() {
  if (!path_.empty()) ::unlink(path_.c_str());
}

ProcessResult run_shell(const std::string& command, std::chrono::milliseconds timeout, std::stop_token stop) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw SolverError("pipe failed: " + std::string(std::strerror(errno)));
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw SolverError("fork failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[1], STDOUT_FILENO);
    ::dup2(fds[1], STDERR_FILENO);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(fds[1]);

  ProcessResult result;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  bool killed = false;
  std::chrono::steady_clock::time_point killed_at;
  char buf[4096];
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    if (killed && now - killed_at > std::chrono::seconds(1)) break;
    if (!killed && (now >= deadline || stop.stop_requested())) {
      if (stop.stop_requested()) result.cancelled = true;
      else result.timed_out = true;
      ::kill(-pid, SIGKILL);
      killed = true;
      killed_at = now;
    }
    pollfd p{fds[0], POLLIN, 0};
    int r = ::poll(&p, 1, 20);
    if (r < 0 && errno != EINTR) break;
    if (r > 0) {
      ssize_t n = ::read(fds[0], buf, sizeof buf);
      if (n > 0) {
        result.output.append(buf, static_cast<std::size_t>(n));
        continue;
      }
      if (n == 0) break;
      if (errno != EINTR && errno != EAGAIN) break;
    }
  }
  ::close(fds[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  // Descendants may still hold the group; make sure nothing outlives the call.
  ::kill(-pid, SIGKILL);
  if (WIFEXITED(status)) result.exit_status = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) result.exit_status = 128 + WTERMSIG(status);
  if (!killed && result.exit_status == 127 && result.output.find("not found") != std::string::npos)
    throw SolverError("cannot run solver command: " + command + "\n" + result.output);
  return result;
}

}  // namespace hflz
