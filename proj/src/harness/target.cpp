#include "harness/target.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "core/errors.hpp"
#include "harness/toy_targets.hpp"

namespace semfuzz::harness {

namespace {

std::chrono::nanoseconds to_ns(std::chrono::milliseconds ms) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(ms);
}

}  // namespace

InProcessTarget::InProcessTarget(std::string name, ToyTargetFn fn, ProbeTotals totals,
                                 std::vector<Bytes> dictionary)
    : TargetAdapter(std::move(name), Kind::InProcess, std::move(totals)),
      fn_(std::move(fn)),
      dictionary_(std::move(dictionary)) {}

ExecutionOutcome InProcessTarget::execute(std::span<const std::uint8_t> payload,
                                          std::chrono::milliseconds hang_budget) {
  const auto start = std::chrono::steady_clock::now();
  collector_.reset(start + hang_budget);
  ProbeContext ctx(collector_);

  bool hang_trap = false;
  try {
    fn_(payload, ctx);
  } catch (const TargetFault&) {
    // crash already recorded by the collector
  } catch (const TargetHang&) {
    hang_trap = true;
  } catch (const std::exception& e) {
    collector_.signal_crash(std::string("uncaught exception: ") + e.what());
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  ExecutionOutcome out;
  out.probes = collector_.extract_probes();
  out.edge_hits = collector_.extract_edges();
  out.exec_time = std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed);
  if (collector_.crash_signaled()) {
    out.status = ExecStatus::Crash;
    out.classification_detail = collector_.crash_detail();
  } else if (hang_trap || elapsed >= hang_budget) {
    out.status = ExecStatus::Hang;
    if (out.exec_time < to_ns(hang_budget)) out.exec_time = to_ns(hang_budget);
    out.classification_detail =
        "exceeded hang budget " + std::to_string(hang_budget.count()) + "ms";
  } else {
    out.status = ExecStatus::Ok;
  }
  return out;
}

ExternalCommandTarget::ExternalCommandTarget(std::string name, std::vector<std::string> argv,
                                             ProbeTotals totals)
    : TargetAdapter(std::move(name), Kind::ExternalCommand, std::move(totals)),
      argv_(std::move(argv)) {
  if (argv_.empty()) throw TargetLoadError("external command target needs a command line");
  use_stdin_ = true;
  for (const std::string& arg : argv_) {
    if (arg == "@@") use_stdin_ = false;
  }
  char tmpl[] = "/tmp/semfuzz-extXXXXXX";
  char* dir = ::mkdtemp(tmpl);
  if (!dir) throw TargetLoadError("cannot create scratch directory for external target");
  work_dir_ = dir;
}

ExecutionOutcome ExternalCommandTarget::execute(std::span<const std::uint8_t> payload,
                                                std::chrono::milliseconds hang_budget) {
  const std::string tag = std::to_string(++exec_counter_);
  const std::string input_path = work_dir_ + "/input_" + tag;
  const std::string probe_path = work_dir_ + "/probes_" + tag;

  if (!use_stdin_) {
    std::ofstream f(input_path, std::ios::binary | std::ios::trunc);
    f.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
    if (!f) throw IoError("cannot write input file for external target");
  }

  int stdin_pipe[2] = {-1, -1};
  if (use_stdin_ && ::pipe(stdin_pipe) != 0) {
    throw IoError("cannot create stdin pipe for external target");
  }

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw IoError("fork failed for external target");
  if (pid == 0) {
    ::setenv("SEMFUZZ_PROBE_OUT", probe_path.c_str(), 1);
    if (use_stdin_) {
      ::dup2(stdin_pipe[0], STDIN_FILENO);
      ::close(stdin_pipe[0]);
      ::close(stdin_pipe[1]);
    } else {
      const int devnull_in = ::open("/dev/null", O_RDONLY);
      if (devnull_in >= 0) ::dup2(devnull_in, STDIN_FILENO);
    }
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) {
      ::dup2(devnull, STDOUT_FILENO);
      ::dup2(devnull, STDERR_FILENO);
    }
    std::vector<char*> argv;
    std::vector<std::string> storage = argv_;
    for (std::string& arg : storage) {
      if (arg == "@@") arg = input_path;
      argv.push_back(arg.data());
    }
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }

  if (use_stdin_) {
    ::close(stdin_pipe[0]);
    std::size_t sent = 0;
    // The child may exit without draining stdin; ignore EPIPE.
    signal(SIGPIPE, SIG_IGN);
    while (sent < payload.size()) {
      const ssize_t n =
          ::write(stdin_pipe[1], payload.data() + sent, payload.size() - sent);
      if (n <= 0) break;
      sent += static_cast<std::size_t>(n);
    }
    ::close(stdin_pipe[1]);
  }

  const auto deadline = start + hang_budget;
  int wait_status = 0;
  bool timed_out = false;
  while (true) {
    const pid_t rc = ::waitpid(pid, &wait_status, WNOHANG);
    if (rc == pid) break;
    if (rc < 0 && errno != EINTR) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &wait_status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  collector_.reset(std::chrono::steady_clock::now());
  std::ifstream report(probe_path);
  if (report) {
    std::string line;
    while (std::getline(report, line)) {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const auto cls = probe_class_from_name(line.substr(0, colon));
      if (!cls) continue;
      try {
        collector_.hit(*cls, static_cast<std::uint32_t>(std::stoul(line.substr(colon + 1))));
      } catch (const std::exception&) {
        // malformed id: skip the line
      }
    }
  }
  ::unlink(probe_path.c_str());
  if (!use_stdin_) ::unlink(input_path.c_str());

  ExecutionOutcome out;
  out.probes = collector_.extract_probes();
  out.edge_hits = collector_.extract_edges();
  out.exec_time = std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed);
  if (timed_out) {
    out.status = ExecStatus::Hang;
    if (out.exec_time < to_ns(hang_budget)) out.exec_time = to_ns(hang_budget);
    out.classification_detail =
        "exceeded hang budget " + std::to_string(hang_budget.count()) + "ms";
  } else if (WIFSIGNALED(wait_status)) {
    out.status = ExecStatus::Crash;
    out.classification_detail = ::strsignal(WTERMSIG(wait_status));
  } else {
    out.status = ExecStatus::Ok;
    if (WIFEXITED(wait_status) && WEXITSTATUS(wait_status) != 0) {
      out.classification_detail = "exit " + std::to_string(WEXITSTATUS(wait_status));
    }
  }
  return out;
}

namespace {

ProbeTotals parse_probe_totals(const std::string& spec) {
  ProbeTotals totals;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw TargetLoadError("probe-totals: expected class=count entries");
    }
    const auto cls = probe_class_from_name(item.substr(0, eq));
    if (!cls) throw TargetLoadError("probe-totals: unknown class \"" + item.substr(0, eq) + "\"");
    const auto count = static_cast<std::uint32_t>(std::stoul(item.substr(eq + 1)));
    if (count == 0) throw TargetLoadError("probe-totals: counts must be > 0");
    totals[*cls] = count;
  }
  return totals;
}

std::vector<std::string> split_command_line(const std::string& line) {
  std::vector<std::string> argv;
  std::stringstream ss(line);
  std::string word;
  while (ss >> word) argv.push_back(word);
  return argv;
}

}  // namespace

std::unique_ptr<TargetAdapter> make_target(const std::string& spec,
                                           const std::string& probe_totals_spec) {
  if (spec == "chunkfmt") return make_chunkfmt_target();
  if (spec == "minijson") return make_minijson_target();
  if (spec.rfind("cmd:", 0) == 0) {
    auto argv = split_command_line(spec.substr(4));
    if (argv.empty()) throw TargetLoadError("cmd: target has an empty command line");
    return std::make_unique<ExternalCommandTarget>(
        "cmd:" + argv[0], std::move(argv), parse_probe_totals(probe_totals_spec));
  }
  throw TargetLoadError("unknown target \"" + spec +
                        "\" (builtin targets: chunkfmt, minijson; or cmd:<command>)");
}

std::vector<std::string> builtin_target_names() { return {"chunkfmt", "minijson"}; }

}  // namespace semfuzz::harness
