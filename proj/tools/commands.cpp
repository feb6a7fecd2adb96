#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "cli_support.hpp"

namespace cli {

namespace {

struct BatteryHandle {
    wbonf_battery_t* p = nullptr;
    ~BatteryHandle() { wbonf_battery_free(p); }
};

struct AnalysisHandle {
    wbonf_analysis_t* p = nullptr;
    ~AnalysisHandle() { wbonf_analysis_free(p); }
};

void check(wbonf_status_t status) {
    if (status != WBONF_OK) fail_status(status);
}

}  // namespace

void AnalyzeOptions::apply_config() {
    if (config_path.empty()) return;
    auto cfg = read_config_file(
        config_path, {"alpha", "model", "min_group_size", "lambda", "output"});
    if (cfg.has("alpha") && !alpha_set) alpha = parse_double_field("alpha", cfg.get("alpha"));
    if (cfg.has("model") && !model_set) model = parse_model_field("model", cfg.get("model"));
    if (cfg.has("min_group_size") && !min_group_set) {
        min_group_size = parse_int_field("min_group_size", cfg.get("min_group_size"));
    }
    if (cfg.has("lambda") && !lambda_set) lambda = parse_double_field("lambda", cfg.get("lambda"));
    if (cfg.has("output") && output_path.empty()) output_path = cfg.get("output");
}

int cmd_analyze(const AnalyzeOptions& opt, bool weight_table_only) {
    auto table = read_battery_file(opt.input_path, opt.model);
    const std::size_t m = table.ids.size();
    const std::size_t k = table.group_names.size();

    std::vector<const char*> names(k);
    for (std::size_t g = 0; g < k; ++g) names[g] = table.group_names[g].c_str();

    BatteryHandle battery;
    check(wbonf_battery_create(table.stats.data(), table.group_of.data(), m, k,
                               names.data(), opt.model, &battery.p));

    wbonf_analysis_config_t cfg{};
    wbonf_analysis_config_init(&cfg);
    cfg.alpha = opt.alpha;
    cfg.min_group_size = opt.min_group_size;
    cfg.lambda = opt.lambda;

    AnalysisHandle analysis;
    check(wbonf_analyze(battery.p, &cfg, &analysis.p));

    wbonf_analysis_summary_t summary{};
    check(wbonf_analysis_summary(analysis.p, &summary));
    std::vector<wbonf_group_row_t> groups(k);
    check(wbonf_analysis_group_table(analysis.p, groups.data(), k));

    std::ostringstream out;
    if (!weight_table_only) {
        std::vector<double> pvalues(m), weights(m), thresholds(m);
        std::vector<uint8_t> rejected(m);
        check(wbonf_analysis_pvalues(analysis.p, pvalues.data(), m));
        check(wbonf_analysis_weights(analysis.p, weights.data(), m));
        check(wbonf_analysis_thresholds(analysis.p, thresholds.data(), m));
        check(wbonf_analysis_rejected(analysis.p, rejected.data(), m));

        out << "id\tgroup\tstat\tp_value\tweight\tthreshold\trejected\n";
        for (std::size_t j = 0; j < m; ++j) {
            out << table.ids[j] << '\t' << table.group_of_label[j] << '\t'
                << fmt_full(table.stats[j]) << '\t' << fmt_full(pvalues[j]) << '\t'
                << fmt_full(weights[j]) << '\t' << fmt_full(thresholds[j]) << '\t'
                << (rejected[j] ? '1' : '0') << '\n';
        }
    } else {
        out << "group\tr\tmean\tvariance\tpi_hat\txi_hat\tdegenerate\tw_raw\tw_hat\n";
        for (std::size_t g = 0; g < k; ++g) {
            out << table.group_names[g] << '\t' << groups[g].size << '\t'
                << fmt_full(groups[g].mean) << '\t' << fmt_full(groups[g].variance)
                << '\t' << fmt_full(groups[g].pi_hat) << '\t'
                << fmt_full(groups[g].xi_hat) << '\t' << groups[g].degenerate << '\t'
                << fmt_full(groups[g].w_raw) << '\t' << fmt_full(groups[g].w_hat)
                << '\n';
        }
    }

    out << "# m\t" << summary.m << '\n';
    out << "# K\t" << summary.n_groups << '\n';
    out << "# alpha\t" << fmt_full(summary.alpha) << '\n';
    out << "# model\t" << (opt.model == WBONF_MODEL_CHISQ ? "chisq" : "normal") << '\n';
    out << "# c\t" << fmt_full(summary.c) << '\n';
    out << "# b_m\t" << fmt_full(summary.bm) << '\n';
    out << "# n_rejected\t" << summary.n_rejected << '\n';
    out << "# unit_fallback\t" << summary.unit_fallback << '\n';
    if (!weight_table_only) {
        for (std::size_t g = 0; g < k; ++g) {
            out << "# group\t" << table.group_names[g] << "\tr\t" << groups[g].size
                << "\tw_hat\t" << fmt_full(groups[g].w_hat) << "\tpi_hat\t"
                << fmt_full(groups[g].pi_hat) << "\txi_hat\t"
                << fmt_full(groups[g].xi_hat) << "\tdegenerate\t"
                << groups[g].degenerate << '\n';
        }
    }

    write_output(opt.output_path, out.str());
    return exit_ok;
}

namespace {

struct SweepAxes {
    std::vector<double> p0{0.0};
    std::vector<double> p1{0.0};
    std::vector<double> xi0{2.0};
    std::vector<double> m1{100.0};
    wbonf_scenario_t base{};
};

SweepAxes load_sweep(const SimulateOptions& opt) {
    SweepAxes axes;
    wbonf_scenario_init(&axes.base);
    auto cfg = read_config_file(
        opt.config_path,
        {"m", "m1", "xi0", "p0", "p1", "k", "model", "alpha", "replicates", "seed",
         "min_group_size", "lambda", "mix_ladder", "random_grouping", "output"});

    if (cfg.has("m")) axes.base.m = parse_int_field("m", cfg.get("m"));
    if (cfg.has("k")) {
        axes.base.n_groups =
            static_cast<int32_t>(parse_int_field("k", cfg.get("k")));
    }
    if (cfg.has("model")) axes.base.model = parse_model_field("model", cfg.get("model"));
    if (cfg.has("alpha")) axes.base.alpha = parse_double_field("alpha", cfg.get("alpha"));
    if (cfg.has("replicates")) {
        axes.base.replicates =
            static_cast<int32_t>(parse_int_field("replicates", cfg.get("replicates")));
    }
    if (cfg.has("seed")) {
        axes.base.master_seed =
            static_cast<uint64_t>(parse_int_field("seed", cfg.get("seed")));
    }
    if (cfg.has("min_group_size")) {
        axes.base.min_group_size =
            parse_int_field("min_group_size", cfg.get("min_group_size"));
    }
    if (cfg.has("lambda")) axes.base.lambda = parse_double_field("lambda", cfg.get("lambda"));
    if (cfg.has("mix_ladder")) {
        axes.base.mix_ladder = parse_bool_field("mix_ladder", cfg.get("mix_ladder"));
    }
    if (cfg.has("random_grouping")) {
        axes.base.random_grouping =
            parse_bool_field("random_grouping", cfg.get("random_grouping"));
    }
    if (cfg.has("p0")) axes.p0 = parse_double_list_field("p0", cfg.get("p0"));
    if (cfg.has("p1")) axes.p1 = parse_double_list_field("p1", cfg.get("p1"));
    if (cfg.has("xi0")) axes.xi0 = parse_double_list_field("xi0", cfg.get("xi0"));
    if (cfg.has("m1")) axes.m1 = parse_double_list_field("m1", cfg.get("m1"));

    // Command-line flags override config values.
    if (opt.alpha) axes.base.alpha = *opt.alpha;
    if (opt.model) axes.base.model = *opt.model;
    if (opt.replicates) axes.base.replicates = static_cast<int32_t>(*opt.replicates);
    if (opt.seed) axes.base.master_seed = *opt.seed;
    if (opt.lambda) axes.base.lambda = *opt.lambda;
    if (opt.min_group_size) axes.base.min_group_size = *opt.min_group_size;
    return axes;
}

std::string sweep_header() {
    return "p0\tp1\txi0\tm1\tk\tr_squared\tpower_weighted\tpower_unweighted\t"
           "diff_pct_points\tfwer_weighted\tfwer_unweighted\tse\treplicates\t"
           "master_seed\n";
}

void append_sweep_row(std::ostringstream& out, const wbonf_scenario_t& sc,
                      const wbonf_power_estimate_t& est) {
    out << fmt_rate(sc.p0) << '\t' << fmt_rate(sc.p1) << '\t' << fmt_rate(sc.xi0)
        << '\t' << sc.m1 << '\t' << sc.n_groups << '\t' << fmt_rate(est.r_squared)
        << '\t' << fmt_rate(est.weighted_power) << '\t'
        << fmt_rate(est.unweighted_power) << '\t' << fmt_rate(est.diff_pct_points)
        << '\t' << fmt_rate(est.fwer_weighted) << '\t'
        << fmt_rate(est.fwer_unweighted) << '\t' << fmt_rate(est.mc_standard_error)
        << '\t' << est.replicates_run << '\t' << sc.master_seed << '\n';
}

}  // namespace

int cmd_simulate(const SimulateOptions& opt) {
    auto axes = load_sweep(opt);
    std::ostringstream out;
    out << sweep_header();
    for (double m1 : axes.m1) {
        for (double xi0 : axes.xi0) {
            for (double p0 : axes.p0) {
                for (double p1 : axes.p1) {
                    wbonf_scenario_t sc = axes.base;
                    sc.m1 = static_cast<int64_t>(m1);
                    sc.xi0 = xi0;
                    sc.p0 = p0;
                    sc.p1 = p1;
                    wbonf_power_estimate_t est{};
                    check(wbonf_run_scenario(&sc, &est));
                    append_sweep_row(out, sc, est);
                }
            }
        }
    }
    write_output(opt.output_path, out.str());
    return exit_ok;
}

namespace {

// Figure 1 battery: m = 100,000 signal strengths drawn as |N(0, 2^2)|, with
// the budget constant solved over the empirical distribution.
struct Fig1Data {
    std::vector<double> xi;
    double c = 0.0;
    int64_t m = 100000;
    double alpha = 0.05;
};

Fig1Data fig1_population(uint64_t seed) {
    Fig1Data data;
    data.xi.resize(static_cast<std::size_t>(data.m));
    std::vector<double> z(data.xi.size());
    check(wbonf_sample_mixture(seed, z.size(), 1.0, 0.0, WBONF_MODEL_NORMAL,
                               z.data()));
    for (std::size_t j = 0; j < z.size(); ++j) data.xi[j] = std::abs(2.0 * z[j]);
    std::vector<int64_t> ones(data.xi.size(), 1);
    wbonf_budget_t budget{};
    check(wbonf_solve_budget(data.xi.data(), ones.data(), data.xi.size(), data.m,
                             data.alpha, &budget));
    data.c = budget.c;
    return data;
}

int figure1(const FigureOptions& opt) {
    auto data = fig1_population(opt.seed);
    std::ostringstream out;
    out << "xi\tweight\n";
    for (double xi : data.xi) {
        double w = 0.0;
        check(wbonf_optimal_weight(xi, data.c, data.m, data.alpha, &w));
        out << fmt_rate(xi) << '\t' << fmt_full(w) << '\n';
    }
    out << "# m\t" << data.m << "\n# alpha\t" << fmt_full(data.alpha) << "\n# c\t"
        << fmt_full(data.c) << "\n# seed\t" << opt.seed << '\n';
    write_output(opt.output_path, out.str());
    return exit_ok;
}

int figure2(const FigureOptions& opt) {
    auto data = fig1_population(opt.seed);
    double bonferroni = -std::log10(data.alpha / static_cast<double>(data.m));
    std::ostringstream out;
    out << "series\txi\tneglog10_threshold\n";
    for (int i = 1; i <= 240; ++i) {
        double xi = 0.05 * i;
        double w = 0.0;
        check(wbonf_optimal_weight(xi, data.c, data.m, data.alpha, &w));
        double threshold = data.alpha * w / static_cast<double>(data.m);
        if (threshold > 0.0) {
            out << "weighted\t" << fmt_rate(xi) << '\t'
                << fmt_rate(-std::log10(threshold)) << '\n';
        }
    }
    for (int i = 1; i <= 240; ++i) {
        out << "bonferroni\t" << fmt_rate(0.05 * i) << '\t' << fmt_rate(bonferroni)
            << '\n';
    }
    out << "# m\t" << data.m << "\n# alpha\t" << fmt_full(data.alpha) << "\n# c\t"
        << fmt_full(data.c) << '\n';
    write_output(opt.output_path, out.str());
    return exit_ok;
}

// Figure 3: method-of-moments estimates over a (mean, variance) grid with
// r = 100 per cell, weight shown relative to the largest cell.
int figure3(const FigureOptions& opt) {
    const int64_t r = 100;
    std::vector<double> xi_hat, s2_list;
    std::vector<int64_t> sizes;
    for (int iy = 1; iy <= 15; ++iy) {
        for (int is = 1; is <= 20; ++is) {
            double y = 0.1 * iy;
            double s2 = 1.0 + 0.1 * is;
            wbonf_mixture_estimate_t est{};
            check(wbonf_mom_normal(y, s2, r, &est));
            xi_hat.push_back(est.xi_hat);
            s2_list.push_back(s2);
            sizes.push_back(r);
        }
    }
    int64_t m = r * static_cast<int64_t>(sizes.size());
    wbonf_budget_t budget{};
    check(wbonf_solve_budget(xi_hat.data(), sizes.data(), sizes.size(), m, 0.05,
                             &budget));
    std::vector<double> w(xi_hat.size());
    double w_max = 0.0;
    for (std::size_t i = 0; i < xi_hat.size(); ++i) {
        check(wbonf_optimal_weight(xi_hat[i], budget.c, m, 0.05, &w[i]));
        w_max = std::max(w_max, w[i]);
    }
    std::ostringstream out;
    out << "xi_hat\ts2\tweight_rel\n";
    for (std::size_t i = 0; i < xi_hat.size(); ++i) {
        out << fmt_rate(xi_hat[i]) << '\t' << fmt_rate(s2_list[i]) << '\t'
            << fmt_rate(w_max > 0 ? w[i] / w_max : 0.0) << '\n';
    }
    out << "# r\t" << r << "\n# c\t" << fmt_full(budget.c) << '\n';
    write_output(opt.output_path, out.str());
    return exit_ok;
}

// Figure 4: power difference against R^2 over a (p0, p1) grid; symbols
// follow the caption (p0 = 0.5 -> '+', p1 > 0.1 -> '*', otherwise 'o').
int figure4(const FigureOptions& opt) {
    std::ostringstream out;
    out << "r_squared\tdiff_pct_points\tsymbol\n";
    for (double p0 : {0.01, 0.1, 0.25, 0.5}) {
        for (double p1 : {0.01, 0.1, 0.5, 0.95}) {
            wbonf_scenario_t sc{};
            wbonf_scenario_init(&sc);
            sc.p0 = p0;
            sc.p1 = p1;
            sc.replicates = static_cast<int32_t>(opt.replicates);
            sc.master_seed = opt.seed;
            wbonf_power_estimate_t est{};
            check(wbonf_run_scenario(&sc, &est));
            char symbol = p0 == 0.5 ? '+' : (p1 > 0.1 ? '*' : 'o');
            out << fmt_rate(est.r_squared) << '\t' << fmt_rate(est.diff_pct_points)
                << '\t' << symbol << '\n';
        }
    }
    out << "# replicates\t" << opt.replicates << "\n# seed\t" << opt.seed << '\n';
    write_output(opt.output_path, out.str());
    return exit_ok;
}

}  // namespace

int cmd_figure(const FigureOptions& opt) {
    if (opt.which == "fig1") return figure1(opt);
    if (opt.which == "fig2") return figure2(opt);
    if (opt.which == "fig3") return figure3(opt);
    if (opt.which == "fig4") return figure4(opt);
    fail(exit_usage, "unknown figure id '" + opt.which +
                         "' (expected fig1, fig2, fig3 or fig4)");
}

}  // namespace cli
