//
// Copyright 2026 The qrbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "qrbench/sandbox.hpp"

#include <fcntl.h>
#include <grp.h>
#include <poll.h>
#include <sched.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <vector>

#include "qrbench/error.hpp"

namespace qrbench {

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "PASS";
    case Verdict::kFail:
      return "FAIL";
    case Verdict::kTimeout:
      return "TIMEOUT";
    case Verdict::kRuntimeError:
      return "RUNTIME_ERROR";
    case Verdict::kAssemblyError:
      return "ASSEMBLY_ERROR";
  }
  return "RUNTIME_ERROR";
}

Verdict parse_verdict(std::string_view name) {
  if (name == "PASS") return Verdict::kPass;
  if (name == "FAIL") return Verdict::kFail;
  if (name == "TIMEOUT") return Verdict::kTimeout;
  if (name == "RUNTIME_ERROR") return Verdict::kRuntimeError;
  if (name == "ASSEMBLY_ERROR") return Verdict::kAssemblyError;
  throw ValidationError("unknown verdict: '" + std::string(name) + "'");
}

std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("QRBENCH_CACHE_DIR");
      env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::filesystem::temp_directory_path() / "qrbench";
}

std::string assemble_program(const Problem& problem,
                             std::string_view completion,
                             CorpusFormat format) {
  std::string program;
  if (format == CorpusFormat::kHumanEval) {
    program.reserve(problem.prompt.size() + completion.size() +
                    problem.test_suite.size() + 64);
    program.append(problem.prompt);
    program.append(completion);
    program.append("\n\n");
    program.append(problem.test_suite);
    program.append("\n\ncheck(");
    program.append(problem.entry_point);
    program.append(")\n");
  } else {
    program.reserve(completion.size() + problem.test_suite.size() + 64);
    program.append(completion);
    program.append("\n\nassert callable(");
    program.append(problem.entry_point);
    program.append(")\n\n");
    program.append(problem.test_suite);
    program.append("\n");
  }
  return program;
}

namespace {

// The in-process driver separates verdicts by exit code so the harness can
// tell an assertion failure from a crash from a syntax error:
//   0 suite completed, 2 assertion failed, 3 does not compile, 4 any other
//   exception.
constexpr const char* kDriver =
    "import sys\n"
    "src = open(sys.argv[1]).read()\n"
    "try:\n"
    "    code = compile(src, 'program.py', 'exec')\n"
    "except (SyntaxError, ValueError):\n"
    "    sys.exit(3)\n"
    "g = {'__name__': '__main__'}\n"
    "try:\n"
    "    exec(code, g)\n"
    "except AssertionError:\n"
    "    sys.exit(2)\n"
    "except SystemExit as e:\n"
    "    sys.exit(0 if e.code in (0, None) else 4)\n"
    "except BaseException:\n"
    "    import traceback\n"
    "    traceback.print_exc()\n"
    "    sys.exit(4)\n"
    "sys.exit(0)\n";

constexpr uid_t kNobodyUid = 65534;
constexpr gid_t kNobodyGid = 65534;

std::string resolve_executable(const std::string& name) {
  if (name.find('/') != std::string::npos) {
    return name;
  }
  const char* path_env = std::getenv("PATH");
  const std::string path(path_env != nullptr ? path_env
                                             : "/usr/local/bin:/usr/bin:/bin");
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t end = path.find(':', start);
    if (end == std::string::npos) end = path.size();
    const std::string dir = path.substr(start, end - start);
    if (!dir.empty()) {
      const std::string candidate = dir + "/" + name;
      if (access(candidate.c_str(), X_OK) == 0) {
        return candidate;
      }
    }
    start = end + 1;
  }
  return {};
}

struct Pipe {
  int read_fd = -1;
  int write_fd = -1;

  Pipe() {
    int fds[2];
    if (pipe2(fds, O_CLOEXEC) != 0) {
      throw SandboxError("sandbox: cannot create pipe");
    }
    read_fd = fds[0];
    write_fd = fds[1];
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (read_fd >= 0) close(read_fd);
    read_fd = -1;
  }
  void close_write() {
    if (write_fd >= 0) close(write_fd);
    write_fd = -1;
  }
};

// Removes the workdir tree even when a privilege-dropped child left files
// owned by nobody (the harness owns the parent directory).
void remove_tree(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
}

}  // namespace

ExecutionResult run_one(const Problem& problem, std::string_view completion,
                        CorpusFormat format, const ExecLimits& limits,
                        const SandboxOptions& options) {
  if (limits.timeout_s <= 0.0 || limits.memory_mb <= 0) {
    throw ValidationError("run_one: limits must be positive");
  }

  const std::string python = resolve_executable(options.python_exe);
  if (python.empty() || access(python.c_str(), X_OK) != 0) {
    throw SandboxError("sandbox: python interpreter not found: " +
                       options.python_exe);
  }

  // Private working directory for this execution.
  std::filesystem::path root =
      options.work_root.empty() ? cache_dir() / "sandbox" : options.work_root;
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  std::string workdir_template = (root / "run-XXXXXX").string();
  if (mkdtemp(workdir_template.data()) == nullptr) {
    throw SandboxError("sandbox: cannot create workdir under " +
                       root.string());
  }
  const std::filesystem::path workdir(workdir_template);

  const std::string program_path = (workdir / "program.py").string();
  {
    std::ofstream out(program_path, std::ios::binary);
    out << assemble_program(problem, completion, format);
    if (!out) {
      remove_tree(workdir);
      throw SandboxError("sandbox: cannot write program file");
    }
  }

  const bool drop = options.drop_privileges && geteuid() == 0;
  if (drop) {
    // The child becomes nobody; it still needs to read the program and use
    // its workdir as scratch space.
    chmod(program_path.c_str(), 0644);
    chown(workdir.c_str(), kNobodyUid, kNobodyGid);
    chmod(workdir.c_str(), 0700);
  }

  // argv/envp and every other child input is prepared before fork: the
  // child may only use async-signal-safe calls until execve.
  std::vector<std::string> argv_storage = {python, "-I", "-c", kDriver,
                                           program_path};
  std::vector<char*> argv;
  for (std::string& arg : argv_storage) argv.push_back(arg.data());
  argv.push_back(nullptr);

  std::vector<std::string> env_storage = {
      "PATH=/usr/local/bin:/usr/bin:/bin",
      "HOME=" + workdir.string(),
      "TMPDIR=" + workdir.string(),
      "LC_ALL=C.UTF-8",
      "PYTHONHASHSEED=0",
      "PYTHONDONTWRITEBYTECODE=1",
      "PYTHONIOENCODING=utf-8",
  };
  std::vector<char*> envp;
  for (std::string& var : env_storage) envp.push_back(var.data());
  envp.push_back(nullptr);

  const std::string workdir_str = workdir.string();
  const rlim_t address_space =
      static_cast<rlim_t>(limits.memory_mb) * 1024 * 1024;
  const rlim_t cpu_seconds =
      static_cast<rlim_t>(std::ceil(limits.timeout_s)) + 2;

  Pipe output_pipe;   // child stdout+stderr
  Pipe status_pipe;   // child writes errno here if execve fails (O_CLOEXEC)
  const int devnull = open("/dev/null", O_RDONLY);
  if (devnull < 0) {
    remove_tree(workdir);
    throw SandboxError("sandbox: cannot open /dev/null");
  }

  const auto start_time = std::chrono::steady_clock::now();
  const pid_t child = fork();
  if (child < 0) {
    close(devnull);
    remove_tree(workdir);
    throw SandboxError("sandbox: fork failed");
  }

  if (child == 0) {
    // --- child: async-signal-safe calls only ---
    setsid();
    if (options.isolate_network) {
      unshare(CLONE_NEWNET);  // best effort
    }
    struct rlimit rl;
    rl.rlim_cur = rl.rlim_max = address_space;
    setrlimit(RLIMIT_AS, &rl);
    rl.rlim_cur = rl.rlim_max = cpu_seconds;
    setrlimit(RLIMIT_CPU, &rl);
    rl.rlim_cur = rl.rlim_max = 0;
    setrlimit(RLIMIT_CORE, &rl);
    rl.rlim_cur = rl.rlim_max = rlim_t{64} * 1024 * 1024;
    setrlimit(RLIMIT_FSIZE, &rl);
    if (options.nproc_limit > 0) {
      rl.rlim_cur = rl.rlim_max = static_cast<rlim_t>(options.nproc_limit);
      setrlimit(RLIMIT_NPROC, &rl);
    }
    if (chdir(workdir_str.c_str()) != 0) {
      const int err = errno;
      ssize_t ignored = write(status_pipe.write_fd, &err, sizeof(err));
      (void)ignored;
      _exit(127);
    }
    dup2(devnull, STDIN_FILENO);
    dup2(output_pipe.write_fd, STDOUT_FILENO);
    dup2(output_pipe.write_fd, STDERR_FILENO);
    if (drop) {
      if (setgroups(0, nullptr) != 0 || setgid(kNobodyGid) != 0 ||
          setuid(kNobodyUid) != 0 || setuid(0) == 0) {
        const int err = EPERM;
        ssize_t ignored = write(status_pipe.write_fd, &err, sizeof(err));
        (void)ignored;
        _exit(127);
      }
    }
    execve(python.c_str(), argv.data(), envp.data());
    const int err = errno;
    ssize_t ignored = write(status_pipe.write_fd, &err, sizeof(err));
    (void)ignored;
    _exit(127);
  }

  // --- parent ---
  close(devnull);
  output_pipe.close_write();
  status_pipe.close_write();

  const auto deadline =
      start_time + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(limits.timeout_s));

  std::string output;
  bool truncated = false;
  bool timed_out = false;

  auto drain_output = [&](int wait_ms) {
    struct pollfd pfd{output_pipe.read_fd, POLLIN, 0};
    const int ready = poll(&pfd, 1, wait_ms);
    if (ready <= 0) return;
    char chunk[4096];
    for (;;) {
      const ssize_t n = read(output_pipe.read_fd, chunk, sizeof(chunk));
      if (n <= 0) break;
      const std::size_t keep = std::min(
          static_cast<std::size_t>(n),
          options.output_cap_bytes > output.size()
              ? options.output_cap_bytes - output.size()
              : std::size_t{0});
      if (keep < static_cast<std::size_t>(n)) truncated = true;
      output.append(chunk, keep);
      if (static_cast<std::size_t>(n) < sizeof(chunk)) break;
    }
  };

  // Make the output pipe non-blocking so draining never stalls the watchdog.
  fcntl(output_pipe.read_fd, F_SETFL, O_NONBLOCK);

  // Watch the child with WNOWAIT so its zombie (and therefore its pid and
  // process-group id) stays pinned until the group sweep below; a reaped pid
  // could be recycled, making kill(-child) hit an unrelated process.
  auto child_done = [&]() {
    siginfo_t info;
    info.si_pid = 0;
    waitid(P_PID, static_cast<id_t>(child), &info,
           WEXITED | WNOHANG | WNOWAIT);
    return info.si_pid == child;
  };

  for (;;) {
    if (child_done()) {
      break;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      timed_out = true;
      break;
    }
    drain_output(20);
  }

  if (timed_out) {
    // Kill the child's whole process group (it called setsid), sweeping any
    // fork-storm descendants.
    for (int attempt = 0; attempt < 50; ++attempt) {
      kill(-child, SIGKILL);
      kill(child, SIGKILL);
      if (child_done()) break;
      usleep(10 * 1000);
    }
  } else {
    // Even on normal exit, hostile code may have left background
    // descendants in the group.
    kill(-child, SIGKILL);
  }

  // Final reap.
  siginfo_t info;
  info.si_pid = 0;
  while (waitid(P_PID, static_cast<id_t>(child), &info, WEXITED) != 0 &&
         errno == EINTR) {
  }

  drain_output(0);
  const auto end_time = std::chrono::steady_clock::now();
  const double wall =
      std::chrono::duration<double>(end_time - start_time).count();

  // Infrastructure failure reported by the pre-exec child?
  int exec_errno = 0;
  const ssize_t status_bytes =
      read(status_pipe.read_fd, &exec_errno, sizeof(exec_errno));
  remove_tree(workdir);
  if (status_bytes == sizeof(exec_errno)) {
    throw SandboxError(std::string("sandbox: cannot start interpreter: ") +
                       std::strerror(exec_errno));
  }

  if (truncated) {
    output.append("\n...[output truncated]");
  }

  ExecutionResult result;
  result.wall_time_s = wall;
  result.output = std::move(output);

  if (timed_out) {
    result.verdict = Verdict::kTimeout;
    return result;
  }
  if (info.si_code == CLD_EXITED) {
    switch (info.si_status) {
      case 0:
        result.verdict = Verdict::kPass;
        break;
      case 2:
        result.verdict = Verdict::kFail;
        break;
      case 3:
        result.verdict = Verdict::kAssemblyError;
        break;
      default:
        result.verdict = Verdict::kRuntimeError;
        break;
    }
  } else {
    // Killed by a signal (OOM kill, segfault, CPU backstop).
    result.verdict = Verdict::kRuntimeError;
  }
  return result;
}

}  // namespace qrbench
