#include "nascar/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "nascar/errors.hpp"

extern char** environ;

namespace nascar {

namespace {

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(o.release()) {}
  Fd& operator=(Fd&& o) noexcept {
    reset(o.release());
    return *this;
  }
  ~Fd() { reset(); }

  int get() const noexcept { return fd_; }
  int release() noexcept { return std::exchange(fd_, -1); }
  void reset(int fd = -1) noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

std::array<Fd, 2> make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
  return {Fd(fds[0]), Fd(fds[1])};
}

struct SpawnActions {
  posix_spawn_file_actions_t actions;
  SpawnActions() { posix_spawn_file_actions_init(&actions); }
  ~SpawnActions() { posix_spawn_file_actions_destroy(&actions); }
};

std::vector<std::string> build_environment(const std::map<std::string, std::string>& overrides) {
  std::vector<std::string> env;
  for (char** e = environ; e && *e; ++e) {
    std::string_view entry(*e);
    const auto eq = entry.find('=');
    if (eq != std::string_view::npos && overrides.contains(std::string(entry.substr(0, eq)))) continue;
    env.emplace_back(entry);
  }
  for (const auto& [k, v] : overrides) env.push_back(k + "=" + v);
  return env;
}

}  // namespace

ProcessResult run_process(std::span<const std::string> argv, const ProcessOptions& options) {
  if (argv.empty()) throw Error("run_process: empty argv");

  auto [in_r, in_w] = make_pipe();
  auto [out_r, out_w] = make_pipe();
  auto [err_r, err_w] = make_pipe();

  SpawnActions sa;
  posix_spawn_file_actions_adddup2(&sa.actions, in_r.get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&sa.actions, out_w.get(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&sa.actions, err_w.get(), STDERR_FILENO);
  const std::string cwd = options.cwd.string();
  if (!cwd.empty()) posix_spawn_file_actions_addchdir_np(&sa.actions, cwd.c_str());

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  std::vector<std::string> env_storage;
  std::vector<char*> cenv;
  char** envp = environ;
  if (!options.env.empty()) {
    env_storage = build_environment(options.env);
    for (auto& e : env_storage) cenv.push_back(e.data());
    cenv.push_back(nullptr);
    envp = cenv.data();
  }

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, cargv[0], &sa.actions, nullptr, cargv.data(), envp);
  in_r.reset();
  out_w.reset();
  err_w.reset();
  if (rc != 0) {
    if (rc == ENOENT || rc == EACCES) return ProcessResult{127, {}, std::string(std::strerror(rc))};
    throw Error("posix_spawnp(" + argv[0] + "): " + std::strerror(rc));
  }

  // Writing stdin and draining both outputs in one poll loop avoids pipe deadlocks.
  ProcessResult result;
  std::size_t written = 0;
  if (options.input.empty()) in_w.reset();
  const int in_fd = in_w.get();
  ::fcntl(in_fd, F_SETFL, O_NONBLOCK);
  ::signal(SIGPIPE, SIG_IGN);

  std::array<char, 65536> buf;
  bool out_open = true, err_open = true;
  while (out_open || err_open || in_w.get() >= 0) {
    std::vector<pollfd> fds;
    if (out_open) fds.push_back({out_r.get(), POLLIN, 0});
    if (err_open) fds.push_back({err_r.get(), POLLIN, 0});
    if (in_w.get() >= 0) fds.push_back({in_w.get(), POLLOUT, 0});
    if (::poll(fds.data(), fds.size(), -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (const auto& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == in_w.get()) {
        const ssize_t n = ::write(p.fd, options.input.data() + written, options.input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) in_w.reset();
        if (written == options.input.size()) in_w.reset();
        continue;
      }
      const ssize_t n = ::read(p.fd, buf.data(), buf.size());
      if (n > 0) {
        (p.fd == out_r.get() ? result.out : result.err).append(buf.data(), static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
        if (p.fd == out_r.get()) out_open = false;
        else err_open = false;
      }
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
  return result;
}

}  // namespace nascar
