// C API implementation: thin translation layer over the core library.
// Exceptions are caught at the boundary and mapped to status codes; the
// message lands in a thread-local buffer.

#include "wbonf.h"

#include <cstring>
#include <exception>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wbonf/battery.hpp"
#include "wbonf/estimation.hpp"
#include "wbonf/numstats.hpp"
#include "wbonf/simharness.hpp"
#include "wbonf/testing.hpp"
#include "wbonf/weights.hpp"

namespace {

thread_local std::string t_last_error;

wbonf_status_t map_status(wbonf::Status s) {
    switch (s) {
        case wbonf::Status::ok: return WBONF_OK;
        case wbonf::Status::null_pointer: return WBONF_ERROR_NULL_POINTER;
        case wbonf::Status::invalid_argument: return WBONF_ERROR_INVALID_ARGUMENT;
        case wbonf::Status::domain_error: return WBONF_ERROR_DOMAIN;
        case wbonf::Status::group_too_small: return WBONF_ERROR_GROUP_TOO_SMALL;
        case wbonf::Status::no_signal: return WBONF_ERROR_NO_SIGNAL;
        case wbonf::Status::solver_failure: return WBONF_ERROR_SOLVER;
        case wbonf::Status::length_mismatch: return WBONF_ERROR_LENGTH_MISMATCH;
        case wbonf::Status::parse_error: return WBONF_ERROR_PARSE;
        case wbonf::Status::io_error: return WBONF_ERROR_IO;
    }
    return WBONF_ERROR_INTERNAL;
}

template <typename Fn>
wbonf_status_t guarded(Fn&& fn) {
    try {
        fn();
        return WBONF_OK;
    } catch (const wbonf::Error& e) {
        t_last_error = e.what();
        return map_status(e.status());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return WBONF_ERROR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return WBONF_ERROR_INTERNAL;
    }
}

wbonf_status_t fail_null(const char* what) {
    t_last_error = std::string(what) + ": null pointer argument";
    return WBONF_ERROR_NULL_POINTER;
}

wbonf::Model to_model(wbonf_model_t m) {
    return m == WBONF_MODEL_CHISQ ? wbonf::Model::chisq : wbonf::Model::normal;
}

}  // namespace

struct wbonf_battery {
    wbonf::TestBattery impl;
};

struct wbonf_analysis {
    wbonf::weights::PipelineResult pipeline;
    wbonf::testing::RejectionResult rejection;
    wbonf_analysis_summary_t summary;
};

extern "C" {

const char* wbonf_status_name(wbonf_status_t status) {
    switch (status) {
        case WBONF_OK: return "ok";
        case WBONF_ERROR_NULL_POINTER: return "null pointer";
        case WBONF_ERROR_INVALID_ARGUMENT: return "invalid argument";
        case WBONF_ERROR_DOMAIN: return "domain error";
        case WBONF_ERROR_GROUP_TOO_SMALL: return "group too small";
        case WBONF_ERROR_NO_SIGNAL: return "no signal";
        case WBONF_ERROR_SOLVER: return "solver failure";
        case WBONF_ERROR_LENGTH_MISMATCH: return "length mismatch";
        case WBONF_ERROR_PARSE: return "parse error";
        case WBONF_ERROR_IO: return "io error";
        case WBONF_ERROR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* wbonf_last_error_message(void) { return t_last_error.c_str(); }

const char* wbonf_version(void) { return "1.0.0"; }

wbonf_status_t wbonf_upper_tail_normal(double t, double* out) {
    if (!out) return fail_null("wbonf_upper_tail_normal");
    return guarded([&] { *out = wbonf::numstats::upper_tail_normal(t); });
}

wbonf_status_t wbonf_upper_tail_normal_inv(double p, double* out) {
    if (!out) return fail_null("wbonf_upper_tail_normal_inv");
    return guarded([&] { *out = wbonf::numstats::upper_tail_normal_inv(p); });
}

wbonf_status_t wbonf_pvalue_normal_two_sided(double t, double* out) {
    if (!out) return fail_null("wbonf_pvalue_normal_two_sided");
    return guarded([&] { *out = wbonf::numstats::pvalue_normal_two_sided(t); });
}

wbonf_status_t wbonf_pvalue_chisq_1df(double x, double* out) {
    if (!out) return fail_null("wbonf_pvalue_chisq_1df");
    return guarded([&] { *out = wbonf::numstats::pvalue_chisq_1df(x); });
}

wbonf_status_t wbonf_optimal_weight(double xi, double c, int64_t m, double alpha,
                                    double* out) {
    if (!out) return fail_null("wbonf_optimal_weight");
    return guarded([&] { *out = wbonf::weights::optimal_weight(xi, c, m, alpha); });
}

wbonf_status_t wbonf_per_hypothesis_power(double xi, double w, int64_t m,
                                          double alpha, double* out) {
    if (!out) return fail_null("wbonf_per_hypothesis_power");
    return guarded([&] { *out = wbonf::testing::per_hypothesis_power(xi, w, m, alpha); });
}

wbonf_status_t wbonf_average_power(const double* xis, const double* weights,
                                   size_t n, int64_t m, double alpha, double* out) {
    if (!xis || !weights || !out) return fail_null("wbonf_average_power");
    return guarded([&] {
        *out = wbonf::testing::average_power(std::span(xis, n), std::span(weights, n),
                                             m, alpha);
    });
}

wbonf_status_t wbonf_fwer_inflation_bound(const int64_t* sizes, size_t n_groups,
                                          double* out) {
    if (!sizes || !out) return fail_null("wbonf_fwer_inflation_bound");
    return guarded([&] {
        *out = wbonf::testing::fwer_inflation_bound(std::span(sizes, n_groups));
    });
}

wbonf_status_t wbonf_solve_budget(const double* xi_by_group, const int64_t* sizes,
                                  size_t n_groups, int64_t m, double alpha,
                                  wbonf_budget_t* out) {
    if (!xi_by_group || !sizes || !out) return fail_null("wbonf_solve_budget");
    return guarded([&] {
        auto sol = wbonf::weights::solve_budget(std::span(xi_by_group, n_groups),
                                                std::span(sizes, n_groups), m, alpha);
        out->c = sol.c;
        out->achieved_mean_weight = sol.achieved_mean_weight;
        out->iterations = sol.iterations;
        out->bracket_lo = sol.bracket_lo;
        out->bracket_hi = sol.bracket_hi;
    });
}

wbonf_status_t wbonf_smooth_and_renorm(const double* raw, const int64_t* sizes,
                                       size_t n_groups, int64_t m, double alpha,
                                       double lambda, double* w_hat_out) {
    if (!raw || !sizes || !w_hat_out) return fail_null("wbonf_smooth_and_renorm");
    return guarded([&] {
        auto gw = wbonf::weights::smooth_and_renorm(
            std::span(raw, n_groups), std::span(sizes, n_groups), m, alpha, lambda);
        std::memcpy(w_hat_out, gw.w_hat.data(), n_groups * sizeof(double));
    });
}

wbonf_status_t wbonf_mom_normal(double mean, double variance, int64_t size,
                                wbonf_mixture_estimate_t* out) {
    if (!out) return fail_null("wbonf_mom_normal");
    return guarded([&] {
        wbonf::estimation::GroupSummary s{0, size, mean, variance};
        auto e = wbonf::estimation::mom_normal(s);
        *out = {e.pi_hat, e.xi_hat, e.xi_signed, e.degenerate ? 1 : 0};
    });
}

wbonf_status_t wbonf_mom_chisq(double mean, double variance, int64_t size,
                               wbonf_mixture_estimate_t* out) {
    if (!out) return fail_null("wbonf_mom_chisq");
    return guarded([&] {
        wbonf::estimation::GroupSummary s{0, size, mean, variance};
        auto e = wbonf::estimation::mom_chisq(s);
        *out = {e.pi_hat, e.xi_hat, e.xi_signed, e.degenerate ? 1 : 0};
    });
}

wbonf_status_t wbonf_weighted_reject(const double* pvalues, const double* weights,
                                     size_t m, double alpha, uint8_t* rejected_out,
                                     double* thresholds_out, int64_t* n_rejected_out) {
    if (!pvalues || !weights || !rejected_out) return fail_null("wbonf_weighted_reject");
    return guarded([&] {
        auto res = wbonf::testing::weighted_reject(std::span(pvalues, m),
                                                   std::span(weights, m), alpha);
        for (size_t j = 0; j < m; ++j) {
            rejected_out[j] = res.rejected[j] ? 1 : 0;
            if (thresholds_out) thresholds_out[j] = res.thresholds[j];
        }
        if (n_rejected_out) *n_rejected_out = res.n_rejected;
    });
}

wbonf_status_t wbonf_battery_create(const double* stats, const int32_t* group_of,
                                    size_t m, size_t n_groups,
                                    const char* const* group_names,
                                    wbonf_model_t model, wbonf_battery_t** out) {
    if (!stats || !group_of || !out) return fail_null("wbonf_battery_create");
    return guarded([&] {
        std::vector<std::string> names;
        names.reserve(n_groups);
        for (size_t g = 0; g < n_groups; ++g) {
            if (group_names && group_names[g]) {
                names.emplace_back(group_names[g]);
            } else {
                names.push_back("G" + std::to_string(g + 1));
            }
        }
        auto battery = wbonf::make_battery(
            std::vector<double>(stats, stats + m),
            std::vector<int32_t>(group_of, group_of + m), std::move(names),
            to_model(model));
        *out = new wbonf_battery{std::move(battery)};
    });
}

void wbonf_battery_free(wbonf_battery_t* battery) { delete battery; }

size_t wbonf_battery_size(const wbonf_battery_t* battery) {
    return battery ? battery->impl.size() : 0;
}

size_t wbonf_battery_group_count(const wbonf_battery_t* battery) {
    return battery ? battery->impl.group_count() : 0;
}

void wbonf_analysis_config_init(wbonf_analysis_config_t* config) {
    if (!config) return;
    config->alpha = 0.05;
    config->min_group_size = 10;
    config->lambda = 0.95;
}

wbonf_status_t wbonf_analyze(const wbonf_battery_t* battery,
                             const wbonf_analysis_config_t* config,
                             wbonf_analysis_t** out) {
    if (!battery || !config || !out) return fail_null("wbonf_analyze");
    return guarded([&] {
        auto analysis = std::make_unique<wbonf_analysis>();
        analysis->pipeline = wbonf::weights::run_pipeline(
            battery->impl, config->alpha, config->min_group_size, config->lambda);
        auto pvalues = battery->impl.pvalues();
        auto per_test = analysis->pipeline.per_test_weights(battery->impl);
        analysis->rejection =
            wbonf::testing::weighted_reject(pvalues, per_test, config->alpha);
        analysis->rejection.bm =
            wbonf::testing::fwer_inflation_bound(analysis->pipeline.weights.sizes);

        analysis->summary.m = static_cast<int64_t>(battery->impl.size());
        analysis->summary.n_groups = static_cast<int64_t>(battery->impl.group_count());
        analysis->summary.alpha = config->alpha;
        analysis->summary.c = analysis->pipeline.weights.budget.c;
        analysis->summary.bm = analysis->rejection.bm;
        analysis->summary.n_rejected = analysis->rejection.n_rejected;
        analysis->summary.unit_fallback =
            analysis->pipeline.weights.unit_fallback ? 1 : 0;
        *out = analysis.release();
    });
}

void wbonf_analysis_free(wbonf_analysis_t* analysis) { delete analysis; }

wbonf_status_t wbonf_analysis_summary(const wbonf_analysis_t* analysis,
                                      wbonf_analysis_summary_t* out) {
    if (!analysis || !out) return fail_null("wbonf_analysis_summary");
    *out = analysis->summary;
    return WBONF_OK;
}

namespace {

wbonf_status_t copy_doubles(const std::vector<double>& src, double* out,
                            size_t capacity, const char* what) {
    if (capacity < src.size()) {
        t_last_error = std::string(what) + ": buffer too small";
        return WBONF_ERROR_LENGTH_MISMATCH;
    }
    std::memcpy(out, src.data(), src.size() * sizeof(double));
    return WBONF_OK;
}

}  // namespace

wbonf_status_t wbonf_analysis_pvalues(const wbonf_analysis_t* analysis, double* out,
                                      size_t capacity) {
    if (!analysis || !out) return fail_null("wbonf_analysis_pvalues");
    return copy_doubles(analysis->rejection.pvalues, out, capacity,
                        "wbonf_analysis_pvalues");
}

wbonf_status_t wbonf_analysis_weights(const wbonf_analysis_t* analysis, double* out,
                                      size_t capacity) {
    if (!analysis || !out) return fail_null("wbonf_analysis_weights");
    return copy_doubles(analysis->rejection.weights, out, capacity,
                        "wbonf_analysis_weights");
}

wbonf_status_t wbonf_analysis_thresholds(const wbonf_analysis_t* analysis, double* out,
                                         size_t capacity) {
    if (!analysis || !out) return fail_null("wbonf_analysis_thresholds");
    return copy_doubles(analysis->rejection.thresholds, out, capacity,
                        "wbonf_analysis_thresholds");
}

wbonf_status_t wbonf_analysis_rejected(const wbonf_analysis_t* analysis, uint8_t* out,
                                       size_t capacity) {
    if (!analysis || !out) return fail_null("wbonf_analysis_rejected");
    const auto& r = analysis->rejection.rejected;
    if (capacity < r.size()) {
        t_last_error = "wbonf_analysis_rejected: buffer too small";
        return WBONF_ERROR_LENGTH_MISMATCH;
    }
    for (size_t j = 0; j < r.size(); ++j) out[j] = r[j] ? 1 : 0;
    return WBONF_OK;
}

wbonf_status_t wbonf_analysis_group_table(const wbonf_analysis_t* analysis,
                                          wbonf_group_row_t* out, size_t capacity) {
    if (!analysis || !out) return fail_null("wbonf_analysis_group_table");
    const auto& p = analysis->pipeline;
    if (capacity < p.estimates.size()) {
        t_last_error = "wbonf_analysis_group_table: buffer too small";
        return WBONF_ERROR_LENGTH_MISMATCH;
    }
    for (size_t g = 0; g < p.estimates.size(); ++g) {
        const auto& s = p.summaries[g];
        const auto& e = p.estimates[g];
        out[g].group = static_cast<int32_t>(g);
        out[g].size = s.size;
        out[g].mean = s.mean;
        out[g].variance = s.variance;
        out[g].pi_hat = e.pi_hat;
        out[g].xi_hat = e.xi_hat;
        out[g].degenerate = e.degenerate ? 1 : 0;
        out[g].w_raw = p.raw_weights[g];
        out[g].w_hat = p.weights.w_hat[g];
    }
    return WBONF_OK;
}

uint64_t wbonf_derive_seed(uint64_t master_seed, uint64_t index) {
    return wbonf::numstats::derive_seed(master_seed, index);
}

wbonf_status_t wbonf_sample_mixture(uint64_t seed, size_t count, double pi,
                                    double xi, wbonf_model_t model, double* out) {
    if (!out) return fail_null("wbonf_sample_mixture");
    return guarded([&] {
        wbonf::numstats::Rng rng(seed);
        auto draws = wbonf::numstats::sample_mixture(count, pi, xi, to_model(model), rng);
        std::memcpy(out, draws.data(), count * sizeof(double));
    });
}

void wbonf_scenario_init(wbonf_scenario_t* scenario) {
    if (!scenario) return;
    scenario->m = 10000;
    scenario->m1 = 100;
    scenario->xi0 = 2.0;
    scenario->p0 = 0.0;
    scenario->p1 = 0.0;
    scenario->n_groups = 10;
    scenario->model = WBONF_MODEL_NORMAL;
    scenario->alpha = 0.05;
    scenario->replicates = 500;
    scenario->master_seed = 1;
    scenario->min_group_size = 10;
    scenario->lambda = 0.95;
    scenario->mix_ladder = 0;
    scenario->random_grouping = 0;
}

namespace {

wbonf::simharness::Scenario to_scenario(const wbonf_scenario_t& sc) {
    wbonf::simharness::Scenario out;
    out.m = sc.m;
    out.m1 = sc.m1;
    out.xi0 = sc.xi0;
    out.p0 = sc.p0;
    out.p1 = sc.p1;
    out.n_groups = sc.n_groups;
    out.model = to_model(sc.model);
    out.alpha = sc.alpha;
    out.replicates = sc.replicates;
    out.master_seed = sc.master_seed;
    out.min_group_size = sc.min_group_size;
    out.lambda = sc.lambda;
    out.mix_ladder = sc.mix_ladder != 0;
    out.random_grouping = sc.random_grouping != 0;
    return out;
}

void to_power_estimate(const wbonf::simharness::PowerEstimate& est,
                       wbonf_power_estimate_t* out) {
    out->weighted_power = est.weighted_power;
    out->unweighted_power = est.unweighted_power;
    out->diff_pct_points = est.diff_pct_points;
    out->fwer_weighted = est.fwer_weighted;
    out->fwer_unweighted = est.fwer_unweighted;
    out->mc_standard_error = est.mc_standard_error;
    out->r_squared = est.r_squared;
    out->replicates_run = est.replicates_run;
}

}  // namespace

wbonf_status_t wbonf_run_scenario(const wbonf_scenario_t* scenario,
                                  wbonf_power_estimate_t* out) {
    if (!scenario || !out) return fail_null("wbonf_run_scenario");
    return guarded([&] {
        auto est = wbonf::simharness::run_scenario(to_scenario(*scenario));
        to_power_estimate(est, out);
    });
}

wbonf_status_t wbonf_fwer_validation(int64_t m, int32_t n_groups, double alpha,
                                     int32_t replicates, wbonf_model_t model,
                                     uint64_t master_seed,
                                     wbonf_power_estimate_t* out) {
    if (!out) return fail_null("wbonf_fwer_validation");
    return guarded([&] {
        auto est = wbonf::simharness::fwer_validation(m, n_groups, alpha, replicates,
                                                      to_model(model), master_seed);
        to_power_estimate(est, out);
    });
}

}  // extern "C"
