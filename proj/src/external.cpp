#include "surropt/external.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <sstream>

namespace surropt {

namespace {

struct CommandResult {
  bool ok = false;
  std::string output;
};

// Runs `sh -c command` with a wall-clock timeout; kills the process group on
// expiry.
CommandResult run_with_timeout(const std::string& command, double timeout_seconds) {
  int pipefd[2];
  if (pipe(pipefd) != 0) return {};

  const pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    return {};
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(pipefd[1], STDOUT_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  close(pipefd[1]);
  CommandResult result;
  const int timeout_ms = static_cast<int>(timeout_seconds * 1000.0);
  int elapsed_ms = 0;
  bool timed_out = false;
  char buf[4096];

  while (true) {
    pollfd pfd{pipefd[0], POLLIN, 0};
    const int step = 50;
    const int r = poll(&pfd, 1, step);
    if (r > 0) {
      const ssize_t n = read(pipefd[0], buf, sizeof(buf));
      if (n <= 0) break;  // EOF
      result.output.append(buf, static_cast<std::size_t>(n));
    } else {
      elapsed_ms += step;
      if (elapsed_ms >= timeout_ms) {
        timed_out = true;
        break;
      }
    }
  }
  close(pipefd[0]);

  if (timed_out) {
    kill(-pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    return {};
  }
  int status = 0;
  waitpid(pid, &status, 0);
  result.ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  return result;
}

bool parse_loss_line(const std::string& output, double& loss, double& std_dev) {
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    double l = 0.0, s = 0.0;
    if (std::sscanf(line.c_str(), "loss=%lf std=%lf", &l, &s) == 2) {
      loss = l;
      std_dev = s;
      return true;
    }
  }
  return false;
}

}  // namespace

EvaluationRecord evaluate_external(const ExternalObjectiveConfig& cfg,
                                   const HyperparameterSpace& space,
                                   const HyperparameterSet& point) {
  std::ostringstream cmd;
  cmd << cfg.command;
  for (std::size_t i = 0; i < space.dims(); ++i) {
    cmd << " " << space.names[i] << "=" << point.values[i];
  }

  EvaluationRecord rec;
  rec.point = point;
  rec.trial_count = 1;
  rec.dropout_passes = 0;

  const CommandResult result = run_with_timeout(cmd.str(), cfg.timeout_seconds);
  double loss = 0.0, std_dev = 0.0;
  if (!result.ok || !parse_loss_line(result.output, loss, std_dev) || !std::isfinite(loss)) {
    rec.failed = true;
    rec.loss = kFailedLossSentinel;
    rec.interval = ConfidenceInterval{kFailedLossSentinel, 0.0};
    return rec;
  }
  rec.loss = loss;
  rec.loss_std = std_dev;
  rec.interval = ConfidenceInterval{loss, std_dev};
  return rec;
}

EngineObjective make_external_objective(const ExternalObjectiveConfig& cfg,
                                        const HyperparameterSpace& space) {
  EngineObjective obj;
  obj.space = space;
  obj.evaluate = [cfg, space](const HyperparameterSet& point, std::uint64_t) {
    return evaluate_external(cfg, space, point);
  };
  return obj;
}

}  // namespace surropt
