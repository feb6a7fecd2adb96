#pragma once

#include <cstdint>
#include <span>

#include "wbonf/numstats.hpp"

// Method-of-moments estimation of the per-group two-component mixture
// (pi_k, xi_k) from the group's observed test statistics.

namespace wbonf::estimation {

struct GroupSummary {
    std::int32_t group_id = 0;
    std::int64_t size = 0;      // r_k, at least 2
    double mean = 0.0;          // Y_k
    double variance = 0.0;      // S^2_k, divisor r_k - 1
};

struct MixtureEstimate {
    std::int32_t group_id = 0;
    double pi_hat = 0.0;        // in [0,1]
    double xi_hat = 0.0;        // >= 0; magnitude used by the weight function
    double xi_signed = 0.0;     // raw signed estimate (normal model diagnostics)
    bool degenerate = false;    // guard forced xi_hat = 0
};

GroupSummary summarize_group(std::span<const double> stats, std::int32_t group_id);

// Normal model: pi = Y^2/(Y^2 + S^2 - 1), xi = Y/pi, guarded by pi > 1/r.
// Raw pi above 1 is clamped to 1 (then xi = Y). Anything non-positive,
// non-finite, or below the guard collapses to the degenerate estimate.
MixtureEstimate mom_normal(const GroupSummary& summary);

// Chi-square model: xi^2 is a root of x^2 - b x + 1 = 0 with
// b = (S^2-1)/(Y-1) + Y - 5. The two positive roots multiply to 1; the
// root above 1 is preferred, falling back to the other root only when the
// preferred root's implied pi fails the 1/r guard and the other passes.
MixtureEstimate mom_chisq(const GroupSummary& summary);

MixtureEstimate estimate_group(const GroupSummary& summary, Model model);

}  // namespace wbonf::estimation
