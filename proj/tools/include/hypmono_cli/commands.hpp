#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypmono_cli/config.hpp"

namespace hypmono::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_nonconvergence = 3 };

struct CommandOptions {
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;  // overrides [run] seed
};

const std::vector<std::string>& command_names();

// Runs one subcommand, writing CSV outputs and manifest.txt into opt.out_dir.
// Configuration problems are reported on `log` and return exit_config.
int run_command(const std::string& name, const ConfigFile& cfg, const CommandOptions& opt, std::ostream& log);

}  // namespace hypmono::cli
