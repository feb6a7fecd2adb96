#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wbonf/battery.hpp"
#include "wbonf/estimation.hpp"

// The optimal weight function, the budget-constant solver over grouped
// estimates, and the smoothing/renormalization step producing the final
// per-group weights.

namespace wbonf::weights {

// Below this magnitude xi is floored before evaluating the weight function;
// the c/|xi| term is singular at zero and the floor reproduces the correct
// limits (weight -> 0 for c > 0, -> m/alpha for c < 0).
inline constexpr double kXiFloor = 1e-6;

// Pipeline reliability screen: a group only enters the weighting as a signal
// group when pi_hat exceeds kPiScreenScale / sqrt(r_k). Pure-null groups
// concentrate pi_hat at the 1/sqrt(r) scale (the ratio of mean noise to
// variance noise does not shrink with r), so the method-of-moments guard
// alone leaves heavy-tailed spurious signals in large groups.
inline constexpr double kPiScreenScale = 1.0;

struct BudgetSolution {
    double c = 0.0;
    double achieved_mean_weight = 1.0;
    std::int32_t iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

struct GroupWeights {
    std::vector<double> w_hat;          // one per group, >= 0
    std::vector<std::int64_t> sizes;    // r_k
    BudgetSolution budget;              // c is NaN under the unit fallback
    double smoothing_lambda = 0.95;
    bool unit_fallback = false;         // every group degenerate

    // Per-test weight sum, sizes . w_hat.
    double weighted_sum() const;
};

// w(xi) = (m/alpha) * Phi-bar(|xi|/2 + c/|xi|), with |xi| floored. Always in
// [0, m/alpha].
double optimal_weight(double xi, double c, std::int64_t m, double alpha);

// Finds c with (1/m) sum_k r_k w(xi_k, c) = 1. The mean weight is monotone
// decreasing in c, so bisection from an expanding bracket is exact enough;
// tolerance 1e-10 on the mean weight, 200 iteration cap.
BudgetSolution solve_budget(std::span<const double> xi_by_group,
                            std::span<const std::int64_t> sizes,
                            std::int64_t m, double alpha);

// Step 5: w_hat_k = lambda * w_k + (1-lambda) * mean(w), rescaled so the
// per-test weights sum to m, then capped at m/alpha with one rescale of the
// uncapped entries if the cap binds.
GroupWeights smooth_and_renorm(std::span<const double> raw,
                               std::span<const std::int64_t> sizes,
                               std::int64_t m, double alpha, double lambda);

// Full per-group diagnostics from the estimation + weighting pipeline.
struct PipelineResult {
    std::vector<estimation::GroupSummary> summaries;
    std::vector<estimation::MixtureEstimate> estimates;
    std::vector<double> raw_weights;    // w(xi_hat_k) at the solved c
    GroupWeights weights;

    // Per-test weights expanded through the battery's group labels.
    std::vector<double> per_test_weights(const TestBattery& battery) const;
};

PipelineResult run_pipeline(const TestBattery& battery, double alpha,
                            std::int64_t min_group_size, double lambda);

// Steps 1-5 composite: summarize -> method of moments -> budget solve ->
// weight -> smooth/renorm. All-degenerate batteries fall back to unit
// weights (plain Bonferroni).
GroupWeights group_weights_pipeline(const TestBattery& battery, double alpha,
                                    std::int64_t min_group_size = 10,
                                    double lambda = 0.95);

}  // namespace wbonf::weights
