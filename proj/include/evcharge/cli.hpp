#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "evcharge/ingest.hpp"
#include "evcharge/model.hpp"
#include "evcharge/sim.hpp"

namespace evcharge::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kInputError = 3,     // unreadable or malformed input files
    kInfeasible = 4,     // solve: the scenario cannot be served
    kSolverFailure = 5,  // the solver could not certify a result
    kOutputError = 6,    // report files could not be written
};

enum class Subcommand { Ingest, Solve, Compare, Simulate };

struct SyntheticSpec {
    std::size_t num_vehicles = 0;
    std::size_t horizon_steps = 24;
    std::uint64_t seed = 0;
};

struct Command {
    Subcommand subcommand = Subcommand::Simulate;
    std::vector<std::string> arguments;  // as given, for the run manifest

    std::filesystem::path sessions;
    std::filesystem::path prices;
    std::vector<std::filesystem::path> scenarios;
    std::filesystem::path scenario_dir;
    std::filesystem::path out_dir;

    IngestConfig ingest;
    Method method = Method::Nominal;
    double radius = 0.0;
    double load_scale = 1.0;
    std::vector<Method> extra_methods;
    std::vector<SummaryFilter> filters;
    std::size_t workers = 1;
    std::optional<SyntheticSpec> synthetic;
    std::size_t days = 0;  // synthetic batch size
    std::string fig2_day;
};

struct ParseResult {
    std::optional<Command> command;
    int exit_code = kOk;   // meaningful when command is empty
    std::string message;   // usage text or error
};

/// Maps an argument vector (without the program name) to a Command.
/// `--help` yields no command, exit code 0 and the usage text.
ParseResult parse_args(const std::vector<std::string>& args);

int run(const Command& command, std::ostream& out, std::ostream& err);

/// parse_args + run, printing usage errors to `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

}  // namespace evcharge::cli
