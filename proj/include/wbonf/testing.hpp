#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wbonf/error.hpp"

// Weighted Bonferroni rejection, per-hypothesis and average power, and the
// group-count error-inflation bound b_m.

namespace wbonf::testing {

struct RejectionResult {
    std::vector<double> pvalues;
    std::vector<double> weights;
    std::vector<double> thresholds;     // alpha * w_j / m
    std::vector<bool> rejected;         // p_j <= threshold_j
    std::int64_t m = 0;
    double alpha = 0.0;
    std::int64_t n_rejected = 0;
    double bm = 0.0;                    // filled by callers that know the grouping
    bool budget_warning = false;        // mean weight off 1 by more than 1e-6
};

// Reject H_j iff P_j / w_j <= alpha / m, i.e. P_j <= alpha w_j / m
// (boundary inclusive). A zero weight never rejects except literal P = 0.
RejectionResult weighted_reject(std::span<const double> pvalues,
                                std::span<const double> weights, double alpha);

// Phi-bar(Phi-bar^-1(alpha w / 2m) - xi) + Phi-bar(Phi-bar^-1(alpha w / 2m) + xi).
// Requires w in (0, m/alpha] so the threshold quantile exists.
double per_hypothesis_power(double xi, double w, std::int64_t m, double alpha);

// Mean per-hypothesis power over the tests with xi != 0 (true signals).
double average_power(std::span<const double> xis, std::span<const double> weights,
                     std::int64_t m, double alpha);

// b_m = (sum_k sqrt(r_k)) / (sum_k r_k); the estimated-weights procedure
// controls family-wise error at level alpha + O(b_m).
double fwer_inflation_bound(std::span<const std::int64_t> sizes);

}  // namespace wbonf::testing
