#pragma once

#include <string>
#include <vector>

namespace calf::test {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the real CLI binary (path baked in via CALF_CLI_BIN) with the given
// arguments. `env` entries like "CALFROCKET_WORKERS=2" prefix the command.
CliResult run_cli(const std::vector<std::string>& args,
                  const std::vector<std::string>& env = {});

// Byte-for-byte file comparison.
bool files_identical(const std::string& a, const std::string& b);

}  // namespace calf::test
