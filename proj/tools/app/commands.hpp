#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "app/config.hpp"

namespace dsf::app {

struct FlagSpec {
    std::string name;  // without leading dashes; also the config-file key
    std::string help;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<FlagSpec> flags;
};

/// Flags shared by every command.
const std::vector<FlagSpec>& global_flags();
/// solve-mode, signature, twopoint, boundary, smear and verify.
const std::vector<CommandSpec>& command_specs();

struct Invocation {
    std::string command;
    RunConfig config;
    std::optional<std::string> config_file;
};

/// Runs one command, writes its outputs and manifest, and returns the exit
/// code: 0 success, 1 verification failure, 2 configuration error,
/// 3 numerical failure.
int run_command(const Invocation& inv, std::ostream& out, std::ostream& err);

}  // namespace dsf::app
