// Copyright 2026 The wiaszz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include <fmt/format.h>

namespace wiaszz::detail {

namespace {

[[noreturn]] void child_exec(
    const std::vector<std::string>& argv, const std::filesystem::path& cwd,
    const std::vector<std::pair<std::string, std::string>>& extra_env,
    int out_fd, int err_fd) {
  if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
    ::dprintf(err_fd, "chdir %s: %s", cwd.c_str(), std::strerror(errno));
    ::_exit(127);
  }
  ::dup2(out_fd, STDOUT_FILENO);
  ::dup2(err_fd, STDERR_FILENO);

  for (const auto& [key, value] : extra_env) {
    ::setenv(key.c_str(), value.c_str(), 1);
  }

  std::vector<char*> raw;
  raw.reserve(argv.size() + 1);
  for (const auto& arg : argv) {
    raw.push_back(const_cast<char*>(arg.c_str()));
  }
  raw.push_back(nullptr);

  ::execvp(raw[0], raw.data());
  ::dprintf(STDERR_FILENO, "exec %s: %s", raw[0], std::strerror(errno));
  ::_exit(127);
}

}  // namespace

ProcessResult run_process(
    const std::vector<std::string>& argv, const std::filesystem::path& cwd,
    const std::vector<std::pair<std::string, std::string>>& extra_env) {
  if (argv.empty()) {
    throw std::runtime_error("run_process: empty argv");
  }

  int out_pipe[2];
  int err_pipe[2];
  if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
    throw std::runtime_error(fmt::format("pipe: {}", std::strerror(errno)));
  }

  pid_t pid = ::fork();
  if (pid < 0) {
    throw std::runtime_error(fmt::format("fork: {}", std::strerror(errno)));
  }
  if (pid == 0) {
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    child_exec(argv, cwd, extra_env, out_pipe[1], err_pipe[1]);
  }

  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  ProcessResult result;
  struct Stream {
    int fd;
    std::string* sink;
    bool open = true;
  };
  Stream streams[2] = {{out_pipe[0], &result.out}, {err_pipe[0], &result.err}};

  char buffer[64 * 1024];
  while (streams[0].open || streams[1].open) {
    struct pollfd fds[2];
    nfds_t n = 0;
    for (auto& s : streams) {
      if (s.open) {
        fds[n].fd = s.fd;
        fds[n].events = POLLIN;
        ++n;
      }
    }
    if (::poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (nfds_t i = 0; i < n; ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      for (auto& s : streams) {
        if (s.open && s.fd == fds[i].fd) {
          ssize_t got = ::read(s.fd, buffer, sizeof(buffer));
          if (got > 0) {
            s.sink->append(buffer, static_cast<size_t>(got));
          } else if (got == 0 || (got < 0 && errno != EINTR)) {
            ::close(s.fd);
            s.open = false;
          }
        }
      }
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace wiaszz::detail
