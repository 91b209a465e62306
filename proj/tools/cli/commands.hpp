#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace leocdn::cli {

struct Invocation {
    std::string subcommand;  // constellation | workload | trace | replay | report
    std::optional<std::filesystem::path> config_path;
    std::optional<std::string> preset;
    std::vector<std::string> overrides;
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> strategies;  // names, or "all"
    std::optional<std::filesystem::path> traces;
    bool binary = false;
    bool store_dump = false;  // replay: write stores_<strategy>.csv
    std::vector<double> times;  // constellation snapshot times
};

/// Runs one subcommand; throws leocdn::Error subclasses on failure.
void run_subcommand(const Invocation& invocation);

/// run_subcommand with errors mapped to exit codes: 0 ok, 1 config, 2 I/O,
/// 3 simulation. The message goes to the log.
int execute(const Invocation& invocation);

/// Parses argv and executes. Usage errors exit with 1.
int run_main(int argc, char** argv);

}  // namespace leocdn::cli
