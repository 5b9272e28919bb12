#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "igeo/exterior.hpp"

namespace igeo {

enum class Command {
    CroftonSphere,
    CroftonCp,
    CdScan,
    Prop34Scan,
    TasakiCheck,
    Transversality,
    Equidistribution,
    SunExample,
    Calibrate,
};

enum class Format { Csv, Json };

std::string to_string(Command c);
Command parse_command(const std::string& s);

struct RunConfig {
    Command command = Command::CdScan;
    std::uint64_t seed = 42;
    /// 0 picks the command's default
    std::size_t samples = 0;
    std::size_t restarts = 8;
    unsigned threads = 1;
    Index n = 2;
    Index k = 1;
    Index l = 2;
    Index m = 2;
    Index p = 1;
    Index q = 2;
    int tau_grid = 9;
    /// Fermat curve degree when crofton-cp / equidistribution get no input
    int degree = 2;
    /// family for prop34-scan: interleaved, interleaved-complex, wirtinger, grassmann, cp
    std::string kind = "interleaved";
    /// structure tolerance for scans; 0 picks the sample-size default
    double tolerance = 0.0;
    bool fail_on_nonconvergence = false;
    std::string input_path;
    std::string output_path;
    Format format = Format::Csv;
};

std::size_t default_samples(Command c);
/// Fills defaults; throws ConfigError on invalid knobs.
RunConfig resolve(RunConfig config);
/// Ordered key=value echo of every knob that affects results.
std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& config);

struct ReportRow {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::string flag;
};

struct RunReport {
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, double>> diagnostics;
    double wall_time = 0.0;
    /// some scan restart stopped at max_polls
    bool non_convergence = false;
};

RunReport run(const RunConfig& config);

/// Timing is the only field that differs between identical runs; leave it
/// out for bitwise comparisons.
std::string emit(const RunReport& report, Format format, bool include_timing = true);
RunReport parse_report(const std::string& text, Format format);

/// Writes to config.output_path, or stdout when empty. Throws IoError.
void write_report(const RunReport& report, const RunConfig& config);

/// Flags override values from the --config key=value file. Help requests
/// and flag errors come back with exit_requested set and the text to print.
struct ParsedArgs {
    RunConfig config;
    bool exit_requested = false;
    int exit_code = 0;
    std::string message;
};
ParsedArgs parse_args(int argc, const char* const* argv);

}  // namespace igeo
