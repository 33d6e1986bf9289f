#include <cctype>
#include <cstdlib>

#include "hflz/chc.hpp"
#include "hflz/subprocess.hpp"

namespace hflz {

std::string to_string(SolverVerdict::Kind kind) {
  switch (kind) {
    case SolverVerdict::Kind::Sat: return "sat";
    case SolverVerdict::Kind::Unsat: return "unsat";
    case SolverVerdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

SolverVerdict parse_solver_output(const std::string& output) {
  std::size_t pos = 0;
  while (pos < output.size()) {
    std::size_t nl = output.find('\n', pos);
    if (nl == std::string::npos) nl = output.size();
    std::string line = output.substr(pos, nl - pos);
    pos = nl + 1;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.erase(line.begin());
    if (line == "sat") return {SolverVerdict::Kind::Sat, pos < output.size() ? output.substr(pos) : ""};
    if (line == "unsat") return {SolverVerdict::Kind::Unsat, ""};
    if (line == "unknown") return {SolverVerdict::Kind::Unknown, output};
  }
  return {SolverVerdict::Kind::Unknown, output};
}

SolverVerdict solve_external(const ChcSystem& system, const SolverConfig& config, std::stop_token stop) {
  TempFile file(emit_smtlib_horn(system), ".smt2");
  ProcessResult r = run_shell(instantiate_command(config.command, file.path()), config.timeout, stop);
  if (r.timed_out) return {SolverVerdict::Kind::Unknown, "timeout"};
  if (r.cancelled) return {SolverVerdict::Kind::Unknown, "cancelled"};
  return parse_solver_output(r.output);
}

std::optional<std::string> solver_from_environment() {
  const char* v = std::getenv("HFLMC_SOLVER");
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace hflz
