#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pwave::cli {

enum ExitCode : int {
  ok = 0,
  invariant_failure = 1,
  strict_validity_failure = 2,
  usage = 64,
  data_error = 65,
  io_error = 74,
};

/// Runs `pwave <command> [options]`; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pwave::cli
