#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pencil {

/// Process exit codes shared by all commands.
enum ExitCode : int {
    kExitOk = 0,
    kExitNotDType = 1,
    kExitInvalid = 2,
    kExitInfeasible = 3,
    kExitNumerical = 4,
};

struct CommandOptions
{
    std::optional<std::string> preset;
    std::optional<std::string> config_path;
    std::optional<double> tol;
    std::optional<std::size_t> samples;
    /// Output directory for OBJ/CSV files; defaults to the working directory.
    std::optional<std::string> out_dir;
    /// Overrides of the target constant and branch; setting c switches the
    /// scene to synthesized mode.
    std::optional<double> c;
    std::optional<int> sign;
};

int cmd_build(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_classify(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_synthesize(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// `pencil <build|verify|classify|synthesize> [--preset NAME | --config PATH]
/// [--tol X] [--samples N] [-o DIR] [--c C] [--sign S]`
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pencil
