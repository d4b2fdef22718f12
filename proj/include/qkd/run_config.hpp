#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkd/qmath.hpp"
#include "qkd/sweep.hpp"

namespace qkd {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inclusive lo:hi:step range as written on the command line.
struct GridSpec {
    double lo = 0.0, hi = 0.0, step = 0.0;
    std::vector<double> expand() const;
};

GridSpec parse_grid(const std::string& text);

/// One flat bag of settings for every subcommand. A config file provides
/// the same keys as the flags ('key = value' lines, '#' comments); values
/// given as flags override the file.
struct RunConfig {
    std::string protocol = "sarg04";  // sarg04 | sarg04-2set | bb84
    std::optional<double> qber;
    std::optional<GridSpec> qber_grid;
    std::optional<GridSpec> visibility_grid;
    std::optional<GridSpec> sweep_range;
    double alpha = 0.25;
    double eta = 0.1;
    double p_dark = 1e-5;
    double visibility = 1.0;
    std::string format = "csv";  // csv | json
    std::string output;          // empty -> stdout
    bool preprocessing = true;
    int n_max = kDefaultNmax;
    unsigned threads = 0;
    bool find_threshold = false;
};

/// Applies 'key = value' lines from the file on top of cfg. Unknown keys,
/// malformed lines and unparsable values raise ConfigError.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Range checks shared by all subcommands; raises ConfigError.
void validate(const RunConfig& cfg);

Protocol protocol_from_string(const std::string& name);

/// Fixed-width numeric formatting used for every emitted value: 12
/// significant digits, identical in CSV and JSON output.
std::string format_sig12(double v);

std::string sweep_csv(const std::vector<SweepRecord>& records);
std::string sweep_json(const std::vector<SweepRecord>& records);

std::string compare_csv(const std::vector<CompareRow>& rows);
std::string compare_json(const std::vector<CompareRow>& rows);

std::string visibility_csv(const std::vector<VisibilityRow>& rows);
std::string visibility_json(const std::vector<VisibilityRow>& rows);

struct UpperGridRow {
    double qber = 0.0;
    double r_sk = 0.0;
    double q_opt = 0.0;
};

std::string upper_grid_csv(const std::vector<UpperGridRow>& rows);
std::string upper_grid_json(const std::vector<UpperGridRow>& rows);

}  // namespace qkd
