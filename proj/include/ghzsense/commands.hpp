#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ghzsense/run_config.hpp"

namespace ghzsense {

inline constexpr std::string_view kToolName = "ghzsense";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_io_error = 1,
    exit_config_error = 2,
    exit_numerical_failure = 3,
    exit_verification_failure = 4,
};

struct CommandResult {
    int exit_code = exit_ok;
    std::vector<std::filesystem::path> outputs;
    std::string summary;
};

CommandResult cmd_decoherence_curve(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandResult cmd_scaling(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandResult cmd_mc_verify(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandResult cmd_mc_estimate(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandResult cmd_optimal_time(const RunConfig& cfg, const std::filesystem::path& out_dir);
CommandResult cmd_bounds_check(const RunConfig& cfg, const std::filesystem::path& out_dir);

std::vector<std::string_view> command_names();

/// Validates the config, writes effective_config.json, runs the named command and
/// maps exceptions onto exit codes.
CommandResult run_command(std::string_view name, const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace ghzsense
