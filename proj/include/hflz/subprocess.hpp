#pragma once

#include <chrono>
#include <stop_token>
#include <string>
#include <string_view>

namespace hflz {

struct ProcessResult {
  int exit_status = -1;
  /// stdout and stderr, interleaved.
  std::string output;
  bool timed_out = false;
  bool cancelled = false;
};

/// Runs `command` through /bin/sh in its own process group. The whole group is
/// killed when the deadline passes or `stop` is requested. Throws SolverError
/// if the process cannot be started.
ProcessResult run_shell(const std::string& command, std::chrono::milliseconds timeout, std::stop_token stop = {});

/// Replaces every `{file}` in `templ` with the shell-quoted path, or appends the
/// path when there is no placeholder.
std::string instantiate_command(std::string_view templ, const std::string& path);

/// A file under the system temp directory, removed on destruction.
class TempFile {
 public:
  TempFile(std::string_view contents, std::string_view suffix);
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace hflz
