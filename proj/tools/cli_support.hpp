#pragma once

// Shared pieces of the wbonf command-line tool: file formats, number
// formatting, and the flat key=value config reader. Everything here talks to
// the library through the C API only.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wbonf.h"

namespace cli {

// Exit codes are a stable contract: 0 ok, 1 usage, 2 parse, 3 validation.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_parse = 2,
    exit_validation = 3,
};

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message);

// Round-trip-exact decimal (shortest representation).
std::string fmt_full(double v);
// Six significant digits, for rates.
std::string fmt_rate(double v);

bool valid_label(const std::string& s);

// Input battery: tab-separated, header "id<TAB>stat<TAB>group", '#' comments
// and blank lines skipped.
struct InputTable {
    std::vector<std::string> ids;
    std::vector<double> stats;
    std::vector<int32_t> group_of;
    std::vector<std::string> group_names;  // in first-appearance order
    std::vector<std::string> group_of_label;
};

InputTable read_battery_file(const std::string& path, wbonf_model_t model);

// Flat key = value file; '#' comments; returns values keyed by name.
struct ConfigFile {
    std::map<std::string, std::string> values;
    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string get(const std::string& key) const { return values.at(key); }
};

ConfigFile read_config_file(const std::string& path,
                            const std::vector<std::string>& allowed_keys);

double parse_double_field(const std::string& key, const std::string& text);
std::int64_t parse_int_field(const std::string& key, const std::string& text);
bool parse_bool_field(const std::string& key, const std::string& text);
wbonf_model_t parse_model_field(const std::string& key, const std::string& text);
std::vector<double> parse_double_list_field(const std::string& key,
                                            const std::string& text);

// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text);

// Maps a C API failure to the exit-code contract and aborts the command.
[[noreturn]] void fail_status(wbonf_status_t status);

struct AnalyzeOptions {
    std::string input_path;
    std::string output_path;
    std::string config_path;
    double alpha = 0.05;
    wbonf_model_t model = WBONF_MODEL_NORMAL;
    std::int64_t min_group_size = 10;
    double lambda = 0.95;
    // Which flags were set on the command line (flags override config).
    bool alpha_set = false, model_set = false, min_group_set = false,
         lambda_set = false;

    void apply_config();
};

int cmd_analyze(const AnalyzeOptions& opt, bool weight_table_only);

struct SimulateOptions {
    std::string config_path;
    std::string output_path;
    std::optional<double> alpha;
    std::optional<wbonf_model_t> model;
    std::optional<std::int64_t> replicates;
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda;
    std::optional<std::int64_t> min_group_size;
};

int cmd_simulate(const SimulateOptions& opt);

struct FigureOptions {
    std::string which;
    std::string output_path;
    std::uint64_t seed = 1;
    std::int64_t replicates = 500;  // fig4 only
};

int cmd_figure(const FigureOptions& opt);

}  // namespace cli
