// wbonf: group-weighted Bonferroni multiple testing.
//
// Subcommands: analyze, simulate, figure, weight-table. All numerics go
// through the shared library's C interface.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli_support.hpp"

namespace {

void add_model_option(CLI::App* cmd, std::string& model_text) {
    cmd->add_option("--model", model_text, "Test statistic model (normal|chisq)")
        ->check(CLI::IsMember({"normal", "chisq"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-weighted Bonferroni multiple testing"};
    app.require_subcommand(1);

    cli::AnalyzeOptions analyze_opt;
    std::string analyze_model = "normal";
    auto* analyze = app.add_subcommand(
        "analyze", "Weighted rejection analysis of a statistics file");
    analyze->add_option("input", analyze_opt.input_path,
                        "Tab-separated input (id, stat, group)")
        ->required();
    auto* a_alpha = analyze->add_option("--alpha", analyze_opt.alpha,
                                        "Family-wise error level");
    add_model_option(analyze, analyze_model);
    auto* a_min = analyze->add_option("--min-group-size",
                                      analyze_opt.min_group_size,
                                      "Smallest allowed group");
    auto* a_lambda = analyze->add_option("--lambda", analyze_opt.lambda,
                                         "Weight smoothing factor");
    analyze->add_option("--config", analyze_opt.config_path,
                        "key = value config file (flags take precedence)");
    analyze->add_option("--output,-o", analyze_opt.output_path,
                        "Output path (default stdout)");

    cli::AnalyzeOptions table_opt;
    std::string table_model = "normal";
    auto* table = app.add_subcommand(
        "weight-table", "Per-group estimate and weight diagnostics only");
    table->add_option("input", table_opt.input_path, "Tab-separated input")
        ->required();
    auto* t_alpha = table->add_option("--alpha", table_opt.alpha, "Level");
    add_model_option(table, table_model);
    auto* t_min = table->add_option("--min-group-size", table_opt.min_group_size,
                                    "Smallest allowed group");
    auto* t_lambda = table->add_option("--lambda", table_opt.lambda, "Smoothing");
    table->add_option("--config", table_opt.config_path, "Config file");
    table->add_option("--output,-o", table_opt.output_path, "Output path");

    cli::SimulateOptions sim_opt;
    double sim_alpha = 0.0;
    std::string sim_model;
    std::int64_t sim_reps = 0;
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo power/FWER sweep from a scenario config");
    simulate->add_option("config", sim_opt.config_path, "Scenario config file")
        ->required();
    auto* s_alpha = simulate->add_option("--alpha", sim_alpha, "Level override");
    add_model_option(simulate, sim_model);
    auto* s_reps = simulate->add_option("--replicates", sim_reps,
                                        "Replicates override");
    auto* s_seed = simulate->add_option("--seed", sim_seed, "Master seed override");
    double sim_lambda = 0.0;
    std::int64_t sim_min_group = 0;
    auto* s_lambda = simulate->add_option("--lambda", sim_lambda,
                                          "Smoothing override");
    auto* s_min = simulate->add_option("--min-group-size", sim_min_group,
                                       "Minimum group size override");
    simulate->add_option("--output,-o", sim_opt.output_path, "Output path");

    cli::FigureOptions fig_opt;
    auto* figure = app.add_subcommand(
        "figure", "Plot-ready data for the weight and power displays");
    figure->add_option("which", fig_opt.which, "fig1 | fig2 | fig3 | fig4")
        ->required();
    figure->add_option("--seed", fig_opt.seed, "Seed (default 1)");
    figure->add_option("--replicates", fig_opt.replicates,
                       "Replicates for fig4 (default 500)");
    figure->add_option("--output,-o", fig_opt.output_path, "Output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return cli::exit_usage;
    }

    try {
        if (analyze->parsed()) {
            analyze_opt.alpha_set = a_alpha->count() > 0;
            analyze_opt.model_set = analyze->count("--model") > 0;
            analyze_opt.min_group_set = a_min->count() > 0;
            analyze_opt.lambda_set = a_lambda->count() > 0;
            analyze_opt.model =
                analyze_model == "chisq" ? WBONF_MODEL_CHISQ : WBONF_MODEL_NORMAL;
            analyze_opt.apply_config();
            return cli::cmd_analyze(analyze_opt, false);
        }
        if (table->parsed()) {
            table_opt.alpha_set = t_alpha->count() > 0;
            table_opt.model_set = table->count("--model") > 0;
            table_opt.min_group_set = t_min->count() > 0;
            table_opt.lambda_set = t_lambda->count() > 0;
            table_opt.model =
                table_model == "chisq" ? WBONF_MODEL_CHISQ : WBONF_MODEL_NORMAL;
            table_opt.apply_config();
            return cli::cmd_analyze(table_opt, true);
        }
        if (simulate->parsed()) {
            if (s_alpha->count() > 0) sim_opt.alpha = sim_alpha;
            if (simulate->count("--model") > 0) {
                sim_opt.model =
                    sim_model == "chisq" ? WBONF_MODEL_CHISQ : WBONF_MODEL_NORMAL;
            }
            if (s_reps->count() > 0) sim_opt.replicates = sim_reps;
            if (s_seed->count() > 0) sim_opt.seed = sim_seed;
            if (s_lambda->count() > 0) sim_opt.lambda = sim_lambda;
            if (s_min->count() > 0) sim_opt.min_group_size = sim_min_group;
            return cli::cmd_simulate(sim_opt);
        }
        if (figure->parsed()) {
            return cli::cmd_figure(fig_opt);
        }
    } catch (const cli::CliError& e) {
        std::cerr << "wbonf: " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "wbonf: " << e.what() << '\n';
        return cli::exit_validation;
    }
    return cli::exit_usage;
}
