#include "wbonf/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wbonf::weights {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        raise(Status::invalid_argument, "alpha must lie in (0,1)");
    }
}

double mean_weight(std::span<const double> xis, std::span<const std::int64_t> sizes,
                   std::int64_t m, double alpha, double c) {
    double acc = 0.0;
    for (std::size_t k = 0; k < xis.size(); ++k) {
        acc += static_cast<double>(sizes[k]) * optimal_weight(xis[k], c, m, alpha);
    }
    return acc / static_cast<double>(m);
}

}  // namespace

double optimal_weight(double xi, double c, std::int64_t m, double alpha) {
    check_alpha(alpha);
    if (m < 1) {
        raise(Status::invalid_argument, "optimal_weight: m must be >= 1");
    }
    double a = std::max(std::abs(xi), kXiFloor);
    double arg = a / 2.0 + c / a;
    // Phi-bar underflows to 0 for huge arguments and saturates at 1 for very
    // negative ones; both ends are the intended limits.
    if (arg > 40.0) return 0.0;
    return (static_cast<double>(m) / alpha) * numstats::upper_tail_normal(arg);
}

BudgetSolution solve_budget(std::span<const double> xi_by_group,
                            std::span<const std::int64_t> sizes,
                            std::int64_t m, double alpha) {
    check_alpha(alpha);
    if (xi_by_group.size() != sizes.size() || xi_by_group.empty()) {
        raise(Status::length_mismatch, "solve_budget: group lists empty or mismatched");
    }
    std::int64_t total = 0;
    for (std::int64_t r : sizes) {
        if (r < 1) raise(Status::invalid_argument, "solve_budget: group size < 1");
        total += r;
    }
    if (total != m) {
        raise(Status::invalid_argument, "solve_budget: group sizes must sum to m");
    }
    bool any_signal = std::any_of(xi_by_group.begin(), xi_by_group.end(),
                                  [](double x) { return std::abs(x) > 0.0; });
    if (!any_signal) {
        raise(Status::no_signal, "solve_budget: all group signals are zero");
    }

    constexpr double tol = 1e-10;
    constexpr int max_iter = 200;

    // The mean weight decreases in c: m/alpha at c -> -inf, 0 at c -> +inf.
    double lo = -10.0, hi = 10.0;
    int expansions = 0;
    while (mean_weight(xi_by_group, sizes, m, alpha, lo) < 1.0) {
        lo *= 2.0;
        if (++expansions > 60) {
            raise(Status::solver_failure,
                  "solve_budget: bracket expansion failed at c=" + std::to_string(lo));
        }
    }
    expansions = 0;
    while (mean_weight(xi_by_group, sizes, m, alpha, hi) > 1.0) {
        hi *= 2.0;
        if (++expansions > 60) {
            raise(Status::solver_failure,
                  "solve_budget: bracket expansion failed at c=" + std::to_string(hi));
        }
    }

    BudgetSolution sol;
    sol.bracket_lo = lo;
    sol.bracket_hi = hi;
    double mid = 0.5 * (lo + hi);
    double fmid = 0.0;
    for (int i = 0; i < max_iter; ++i) {
        sol.iterations = i + 1;
        mid = 0.5 * (lo + hi);
        fmid = mean_weight(xi_by_group, sizes, m, alpha, mid);
        if (std::abs(fmid - 1.0) <= tol || (hi - lo) <= 1e-15 * std::max(1.0, std::abs(mid))) {
            break;
        }
        if (fmid > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (std::abs(fmid - 1.0) > 1e-6) {
        raise(Status::solver_failure,
              "solve_budget: no convergence, residual " + std::to_string(fmid - 1.0) +
                  " on bracket [" + std::to_string(sol.bracket_lo) + ", " +
                  std::to_string(sol.bracket_hi) + "]");
    }
    sol.c = mid;
    sol.achieved_mean_weight = fmid;
    return sol;
}

double GroupWeights::weighted_sum() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < w_hat.size(); ++k) {
        acc += static_cast<double>(sizes[k]) * w_hat[k];
    }
    return acc;
}

GroupWeights smooth_and_renorm(std::span<const double> raw,
                               std::span<const std::int64_t> sizes,
                               std::int64_t m, double alpha, double lambda) {
    check_alpha(alpha);
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        raise(Status::invalid_argument, "smooth_and_renorm: lambda must lie in [0,1]");
    }
    if (raw.size() != sizes.size() || raw.empty()) {
        raise(Status::length_mismatch, "smooth_and_renorm: weight/size lists mismatched");
    }
    std::int64_t total = 0;
    for (std::int64_t r : sizes) total += r;
    if (total != m) {
        raise(Status::invalid_argument, "smooth_and_renorm: group sizes must sum to m");
    }

    double mean_raw = 0.0;
    for (double w : raw) {
        if (!(w >= 0.0)) {
            raise(Status::invalid_argument, "smooth_and_renorm: negative raw weight");
        }
        mean_raw += w;
    }
    mean_raw /= static_cast<double>(raw.size());

    GroupWeights out;
    out.sizes.assign(sizes.begin(), sizes.end());
    out.smoothing_lambda = lambda;
    out.w_hat.resize(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        out.w_hat[k] = lambda * raw[k] + (1.0 - lambda) * mean_raw;
    }

    double sum = out.weighted_sum();
    if (sum <= 0.0) {
        raise(Status::no_signal, "smooth_and_renorm: all weights are zero");
    }
    double scale = static_cast<double>(m) / sum;
    for (double& w : out.w_hat) w *= scale;

    // Renormalization can push a weight past the valid-threshold bound m/alpha;
    // cap those and rescale the rest once so the budget still holds.
    double cap = static_cast<double>(m) / alpha;
    double capped_sum = 0.0;
    double uncapped_sum = 0.0;
    bool any_capped = false;
    for (std::size_t k = 0; k < out.w_hat.size(); ++k) {
        if (out.w_hat[k] > cap) {
            any_capped = true;
            capped_sum += static_cast<double>(sizes[k]) * cap;
        } else {
            uncapped_sum += static_cast<double>(sizes[k]) * out.w_hat[k];
        }
    }
    if (any_capped && uncapped_sum > 0.0) {
        double rescale = (static_cast<double>(m) - capped_sum) / uncapped_sum;
        for (std::size_t k = 0; k < out.w_hat.size(); ++k) {
            if (out.w_hat[k] > cap) {
                out.w_hat[k] = cap;
            } else {
                out.w_hat[k] *= rescale;
            }
        }
    }
    return out;
}

std::vector<double> PipelineResult::per_test_weights(const TestBattery& battery) const {
    std::vector<double> w(battery.size());
    for (std::size_t j = 0; j < battery.size(); ++j) {
        w[j] = weights.w_hat[static_cast<std::size_t>(battery.group_of[j])];
    }
    return w;
}

PipelineResult run_pipeline(const TestBattery& battery, double alpha,
                            std::int64_t min_group_size, double lambda) {
    check_alpha(alpha);
    auto sizes = battery.group_sizes();
    std::size_t n_groups = sizes.size();
    std::int64_t m = static_cast<std::int64_t>(battery.size());

    for (std::size_t g = 0; g < n_groups; ++g) {
        if (sizes[g] < min_group_size) {
            raise(Status::group_too_small,
                  "group '" + battery.group_names[g] + "' has " +
                      std::to_string(sizes[g]) + " tests, below the minimum of " +
                      std::to_string(min_group_size));
        }
    }

    // Bucket statistics by group.
    std::vector<std::vector<double>> grouped(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
        grouped[g].reserve(static_cast<std::size_t>(sizes[g]));
    }
    for (std::size_t j = 0; j < battery.size(); ++j) {
        grouped[static_cast<std::size_t>(battery.group_of[j])].push_back(battery.stats[j]);
    }

    PipelineResult result;
    result.summaries.reserve(n_groups);
    result.estimates.reserve(n_groups);
    bool all_degenerate = true;
    for (std::size_t g = 0; g < n_groups; ++g) {
        auto summary = estimation::summarize_group(grouped[g], static_cast<std::int32_t>(g));
        auto est = estimation::estimate_group(summary, battery.model);
        // Reliability screen: under a pure-null group the moment ratio puts
        // pi_hat at the 1/sqrt(r) scale with a heavy-tailed xi_hat, and a
        // single such group can absorb most of the weight budget. Groups
        // whose estimated signal fraction is not clearly above that noise
        // scale enter the weighting as degenerate.
        if (!est.degenerate &&
            est.pi_hat <= kPiScreenScale / std::sqrt(static_cast<double>(summary.size))) {
            est.pi_hat = 0.0;
            est.xi_hat = 0.0;
            est.xi_signed = 0.0;
            est.degenerate = true;
        }
        all_degenerate = all_degenerate && est.degenerate;
        result.summaries.push_back(summary);
        result.estimates.push_back(est);
    }

    if (all_degenerate) {
        // No apparent signal anywhere: plain Bonferroni.
        result.raw_weights.assign(n_groups, 1.0);
        result.weights.w_hat.assign(n_groups, 1.0);
        result.weights.sizes = sizes;
        result.weights.smoothing_lambda = lambda;
        result.weights.unit_fallback = true;
        result.weights.budget.c = std::numeric_limits<double>::quiet_NaN();
        return result;
    }

    std::vector<double> xis(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
        xis[g] = std::max(result.estimates[g].xi_hat, kXiFloor);
    }
    auto budget = solve_budget(xis, sizes, m, alpha);

    result.raw_weights.resize(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
        result.raw_weights[g] = optimal_weight(xis[g], budget.c, m, alpha);
    }
    result.weights = smooth_and_renorm(result.raw_weights, sizes, m, alpha, lambda);
    result.weights.budget = budget;
    return result;
}

GroupWeights group_weights_pipeline(const TestBattery& battery, double alpha,
                                    std::int64_t min_group_size, double lambda) {
    return run_pipeline(battery, alpha, min_group_size, lambda).weights;
}

}  // namespace wbonf::weights
