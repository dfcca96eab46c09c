#pragma once

#include <optional>
#include <string>
#include <vector>

namespace deputy::util {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;

    bool ok() const { return exit_code == 0; }
};

/// Runs a child process and captures stdout/stderr. argv[0] is resolved via
/// PATH. Throws std::runtime_error if the process cannot be spawned.
RunResult run_command(const std::vector<std::string>& argv,
                      const std::optional<std::string>& cwd = std::nullopt);

}  // namespace deputy::util
