// Command-line front end for the SARG04/BB84 security-bound library:
// single-photon lower and upper bounds, attenuated-laser sweeps under
// photon-number-splitting attacks, and protocol comparison tables.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qkd/incoherent.hpp"
#include "qkd/lower_bound.hpp"
#include "qkd/run_config.hpp"
#include "qkd/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct CommonFlags {
    std::string config_path;
    std::string sweep_text;
    std::string qber_grid_text;
    std::string visibility_grid_text;
    bool no_preprocessing = false;
};

void add_output_flags(CLI::App* cmd, qkd::RunConfig& cfg) {
    cmd->add_option("--format", cfg.format, "Output format: csv or json");
    cmd->add_option("--output", cfg.output, "Write the table to this file");
}

void emit(const qkd::RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output);
    if (!out) throw qkd::ConfigError("cannot write to '" + cfg.output + "'");
    out << text;
}

// File values first, then explicitly passed flags on top.
void finalize_config(const CLI::App* cmd, const CommonFlags& flags,
                     qkd::RunConfig& cli_values, qkd::RunConfig& cfg) {
    if (!flags.config_path.empty())
        qkd::apply_config_file(cfg, flags.config_path);

    auto passed = [&](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt && opt->count() > 0;
    };
    if (passed("--protocol")) cfg.protocol = cli_values.protocol;
    if (passed("--qber")) cfg.qber = cli_values.qber;
    if (passed("--alpha")) cfg.alpha = cli_values.alpha;
    if (passed("--eta")) cfg.eta = cli_values.eta;
    if (passed("--p-dark")) cfg.p_dark = cli_values.p_dark;
    if (passed("--visibility")) cfg.visibility = cli_values.visibility;
    if (passed("--format")) cfg.format = cli_values.format;
    if (passed("--output")) cfg.output = cli_values.output;
    if (passed("--n-max")) cfg.n_max = cli_values.n_max;
    if (passed("--threads")) cfg.threads = cli_values.threads;
    if (passed("--find-threshold")) cfg.find_threshold = true;
    if (flags.no_preprocessing) cfg.preprocessing = false;
    if (!flags.sweep_text.empty())
        cfg.sweep_range = qkd::parse_grid(flags.sweep_text);
    if (!flags.qber_grid_text.empty())
        cfg.qber_grid = qkd::parse_grid(flags.qber_grid_text);
    if (!flags.visibility_grid_text.empty())
        cfg.visibility_grid = qkd::parse_grid(flags.visibility_grid_text);

    if (const char* env = std::getenv("QKD_NMAX")) {
        try {
            cfg.n_max = std::stoi(env);
        } catch (const std::exception&) {
            throw qkd::ConfigError("QKD_NMAX is not an integer");
        }
    }
    qkd::validate(cfg);
}

int run_lower(const qkd::RunConfig& cfg) {
    const qkd::Protocol p = qkd::protocol_from_string(cfg.protocol);
    if (cfg.qber) {
        const qkd::PreprocessedRate r =
            qkd::r1_bound(p, *cfg.qber, cfg.preprocessing);
        std::cout << "protocol = " << cfg.protocol << '\n'
                  << "qber = " << qkd::format_sig12(*cfg.qber) << '\n'
                  << "r1 = " << qkd::format_sig12(r.rate) << '\n'
                  << "q_opt = " << qkd::format_sig12(r.q) << '\n';
    }
    const double th = qkd::qber_threshold(p, cfg.preprocessing);
    std::cout << "threshold_qber = " << qkd::format_sig12(th) << '\n';
    return kExitOk;
}

int run_upper(const qkd::RunConfig& cfg) {
    if (cfg.qber_grid) {
        std::vector<qkd::UpperGridRow> rows;
        for (double q : cfg.qber_grid->expand()) {
            const qkd::UpperRate r = qkd::upper_rate(q, cfg.preprocessing);
            rows.push_back({q, r.r_sk, r.q_opt});
        }
        emit(cfg, cfg.format == "csv" ? qkd::upper_grid_csv(rows)
                                      : qkd::upper_grid_json(rows));
        return kExitOk;
    }
    if (cfg.qber) {
        const qkd::UpperRate r = qkd::upper_rate(*cfg.qber, cfg.preprocessing);
        std::cout << "qber = " << qkd::format_sig12(*cfg.qber) << '\n'
                  << "r_sk = " << qkd::format_sig12(r.r_sk) << '\n'
                  << "q_opt = " << qkd::format_sig12(r.q_opt) << '\n';
    }
    if (cfg.find_threshold || !cfg.qber) {
        const double th = qkd::upper_threshold(cfg.preprocessing);
        std::cout << "threshold_qber = " << qkd::format_sig12(th) << '\n';
    }
    return kExitOk;
}

int run_practical(const qkd::RunConfig& cfg) {
    if (!cfg.sweep_range)
        throw qkd::ConfigError("practical: missing --sweep dmin:dmax:step");
    qkd::SweepParams params;
    params.alpha_db_km = cfg.alpha;
    params.eta = cfg.eta;
    params.p_dark = cfg.p_dark;
    params.visibility = cfg.visibility;
    params.allow_preprocessing = cfg.preprocessing;
    params.n_max = cfg.n_max;

    const auto records =
        qkd::sweep(cfg.sweep_range->lo, cfg.sweep_range->hi,
                   cfg.sweep_range->step, params, cfg.threads);
    if (!qkd::monotone_decreasing(records))
        std::cerr << "warning: mu_opt or r_sk not monotone over the sweep\n";

    emit(cfg, cfg.format == "csv" ? qkd::sweep_csv(records)
                                  : qkd::sweep_json(records));

    bool any_feasible = false;
    for (const auto& r : records) any_feasible |= r.feasible;
    if (!any_feasible) {
        std::cerr << "error: constraints infeasible over the whole range\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int run_compare(const qkd::RunConfig& cfg) {
    if (!cfg.qber_grid && !cfg.visibility_grid)
        throw qkd::ConfigError(
            "compare: need --qber-grid and/or --visibility-grid");
    std::string text;
    if (cfg.qber_grid) {
        const auto rows =
            qkd::comparison_table(cfg.qber_grid->expand(), cfg.preprocessing);
        text += cfg.format == "csv" ? qkd::compare_csv(rows)
                                    : qkd::compare_json(rows);
    }
    if (cfg.visibility_grid) {
        if (!text.empty()) text += '\n';
        const auto rows = qkd::visibility_table(cfg.visibility_grid->expand());
        text += cfg.format == "csv" ? qkd::visibility_csv(rows)
                                    : qkd::visibility_json(rows);
    }
    emit(cfg, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Security bounds and optimal operating parameters for the SARG04 "
        "protocol, with BB84 comparison points"};
    app.require_subcommand(1);

    qkd::RunConfig cli;
    CommonFlags flags;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config_path,
                        "Flat key = value configuration file");
        cmd->add_flag("--no-preprocessing", flags.no_preprocessing,
                      "Pin Alice's bit-flip probability to q = 0");
    };

    CLI::App* lower = app.add_subcommand(
        "lower", "One-way lower bound r1 and its QBER threshold");
    add_common(lower);
    lower->add_option("--protocol", cli.protocol,
                      "sarg04, sarg04-2set or bb84");
    lower->add_option("--qber", cli.qber, "Evaluate r1 at this QBER");

    CLI::App* upper = app.add_subcommand(
        "upper", "Incoherent-attack upper bound R_sk for SARG04");
    add_common(upper);
    upper->add_option("--qber", cli.qber, "Evaluate R_sk at this QBER");
    upper->add_option("--qber-grid", flags.qber_grid_text,
                      "Tabulate R_sk over lo:hi:step");
    upper->add_flag("--find-threshold", cli.find_threshold,
                    "Report the zero crossing of R_sk");
    add_output_flags(upper, cli);

    CLI::App* practical = app.add_subcommand(
        "practical",
        "Attenuated-laser key-rate optimization per distance (PNS attacks)");
    add_common(practical);
    practical->add_option("--sweep", flags.sweep_text,
                          "Distance sweep dmin:dmax:step in km");
    practical->add_option("--alpha", cli.alpha, "Fiber attenuation, dB/km");
    practical->add_option("--eta", cli.eta, "Detector efficiency");
    practical->add_option("--p-dark", cli.p_dark,
                          "Dark-count probability per gate");
    practical->add_option("--visibility", cli.visibility, "Channel visibility");
    practical->add_option("--n-max", cli.n_max,
                          "Photon-number cutoff (3..10)");
    practical->add_option("--threads", cli.threads,
                          "Worker threads (0 = auto)");
    add_output_flags(practical, cli);

    CLI::App* compare = app.add_subcommand(
        "compare", "Single-photon bound tables over QBER or visibility grids");
    add_common(compare);
    compare->add_option("--qber-grid", flags.qber_grid_text,
                        "QBER grid lo:hi:step");
    compare->add_option("--visibility-grid", flags.visibility_grid_text,
                        "Visibility grid lo:hi:step");
    add_output_flags(compare, cli);

    CLI11_PARSE(app, argc, argv);

    try {
        qkd::RunConfig cfg;
        CLI::App* active = app.get_subcommands().front();
        finalize_config(active, flags, cli, cfg);
        if (active == lower) return run_lower(cfg);
        if (active == upper) return run_upper(cfg);
        if (active == practical) return run_practical(cfg);
        return run_compare(cfg);
    } catch (const qkd::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
