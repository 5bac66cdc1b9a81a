// Running an external program with a script on standard input.

#ifndef FOP_SUBPROCESS_HPP
#define FOP_SUBPROCESS_HPP

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace fop {

struct ProcessResult {
  std::string out;
  std::string err;
  int exit_code = -1;     // valid when exited normally
  int term_signal = 0;    // nonzero when killed by a signal
  bool timed_out = false;
  std::chrono::duration<double> wall{0};
};

// Resolves `program` against PATH unless it contains a slash.
std::optional<std::string> find_executable(const std::string& program);

// Splits a command line on whitespace; single and double quotes group words.
std::vector<std::string> split_command(const std::string& command);

// Runs argv[0] with `input` on stdin. The child is killed when `timeout`
// elapses. Throws SolverNotFound when argv[0] cannot be resolved.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::duration<double> timeout);

}  // namespace fop

#endif  // FOP_SUBPROCESS_HPP
