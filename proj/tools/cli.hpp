#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "unirat/errors.hpp"

namespace unirat::cli {

// Process exit codes.
enum Exit : int {
  kSuccess = 0,
  kObstruction = 2,
  kInconclusive = 3,
  kCertificateFailure = 4,
  kUsage = 64,
};

int exit_code_for(ErrorKind kind);

// Runs one command line (args[0] is the program name). The human summary goes
// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Re-checks every certificate embedded in a report and the outcome it claims.
// Returns the failures, empty when the report stands.
std::vector<std::string> replay_report(const nlohmann::json& report, bool deep);

}  // namespace unirat::cli
