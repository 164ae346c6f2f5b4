#pragma once

#include "dioph/io/json.hpp"
#include "dioph/numerics/types.hpp"
#include "dioph/numerics/weights.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dioph::cli {

enum class ExitCode : int {
    ok = 0,
    usage = 1,            // bad flags or an invalid instance
    degenerate_rank = 2,  // tA Z^m + Z^n has rank below m + n
    budget_exceeded = 3,
    precision_exhausted = 4,
    failure = 5,  // any other error
};

constexpr const char* kSchema = "dioph.report/1";
const char* tool_version();

struct NamedConstant {
    std::string name;
    std::string definition;
};

struct InstanceSpec {
    std::string name;
    std::size_t m = 1, n = 1;
    std::vector<std::string> entries;  // row-major, CertReal::parse syntax
    std::string s = "uniform", r = "uniform";
    std::string theta = "zero";  // "zero" or n entries separated by ';'
    std::vector<NamedConstant> constants;
    std::string note;
};

const std::vector<InstanceSpec>& corpus();
// Throws InvalidArgument for an unknown name.
InstanceSpec find_instance(const std::string& name);
// Rows separated by ';', entries by ','.
InstanceSpec instance_from_matrix(const std::string& text);

TargetMatrix target_matrix(const InstanceSpec& spec);
WeightVector weights_s(const InstanceSpec& spec);
WeightVector weights_r(const InstanceSpec& spec);
CertVector theta_vector(const InstanceSpec& spec);

// "a1;...;am;b1;...;bn" (or comma separated): relative weights, each group normalized to sum 1.
void apply_combined_weights(InstanceSpec& spec, const std::string& text);

// "2^e" with e rational, or a positive integer power of two; returns log2.
Rational parse_log2_scale(const std::string& text);
// "2^(1/k)", "2^1/k" or "2"; returns k.
int parse_tratio(const std::string& text);

struct RunConfig {
    std::string command;
    InstanceSpec instance;
    Rational log2_min = 1, log2_max = 16;
    int steps_per_octave = 4;
    std::uint64_t budget = 10'000'000;
    long precision = 256;
    std::uint64_t seed = 0;
    std::string out_dir;  // not embedded in reports
    std::string format = "both";  // json, csv or both

    Rational bound = 1'000'000;  // bestapprox N bound
    std::string method = "grid";  // exponents: grid or sequence
    // dyson without an instance
    std::optional<std::string> omega;
    std::size_t dyson_m = 1, dyson_n = 1;
    std::size_t theta_samples = 100;
    double tolerance = 0.1;
    int d = 0;
    std::string norm = "euclidean";
    Rational alpha = Rational(1, 5);
    std::size_t depth = 6;
    Rational check_bound = 10'000;
    std::string selector = "first";
};

io::Json to_json(const RunConfig& cfg);

struct Outputs {
    io::Json report;   // the full report, config included
    std::string csv;   // empty when the command has no table
    std::string summary;
};

// Runs one command in-process; throws the module errors.
Outputs execute(const RunConfig& cfg);

ExitCode exit_code_for(const std::exception& e);

// Parses arguments (argv[0] is the program name), runs, writes files under the output
// directory (--out, else $DIOPH_OUT_DIR, else the working directory) and prints the
// summary. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dioph::cli
