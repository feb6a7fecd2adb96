#include "wbonf/testing.hpp"

#include <cmath>
#include <limits>

#include "wbonf/numstats.hpp"

namespace wbonf::testing {

RejectionResult weighted_reject(std::span<const double> pvalues,
                                std::span<const double> weights, double alpha) {
    if (pvalues.size() != weights.size()) {
        raise(Status::length_mismatch, "weighted_reject: p-value/weight lists differ");
    }
    if (pvalues.empty()) {
        raise(Status::invalid_argument, "weighted_reject: empty input");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        raise(Status::invalid_argument, "weighted_reject: alpha must lie in (0,1)");
    }

    RejectionResult res;
    res.m = static_cast<std::int64_t>(pvalues.size());
    res.alpha = alpha;
    res.pvalues.assign(pvalues.begin(), pvalues.end());
    res.weights.assign(weights.begin(), weights.end());
    res.thresholds.resize(pvalues.size());
    res.rejected.resize(pvalues.size());
    res.bm = std::numeric_limits<double>::quiet_NaN();

    double mean_w = 0.0;
    double md = static_cast<double>(res.m);
    for (std::size_t j = 0; j < pvalues.size(); ++j) {
        if (!(pvalues[j] >= 0.0 && pvalues[j] <= 1.0)) {
            raise(Status::domain_error, "weighted_reject: p-value outside [0,1]");
        }
        if (!(weights[j] >= 0.0)) {
            raise(Status::domain_error, "weighted_reject: negative weight");
        }
        mean_w += weights[j];
        double threshold = alpha * weights[j] / md;
        res.thresholds[j] = threshold;
        bool rej = pvalues[j] <= threshold;
        res.rejected[j] = rej;
        if (rej) res.n_rejected += 1;
    }
    res.budget_warning = std::abs(mean_w / md - 1.0) > 1e-6;
    return res;
}

double per_hypothesis_power(double xi, double w, std::int64_t m, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0) || m < 1) {
        raise(Status::invalid_argument, "per_hypothesis_power: bad alpha or m");
    }
    double q = alpha * w / (2.0 * static_cast<double>(m));
    if (!(q > 0.0 && q <= 0.5)) {
        raise(Status::domain_error,
              "per_hypothesis_power: w must lie in (0, m/alpha]");
    }
    double z = numstats::upper_tail_normal_inv(q);
    return numstats::upper_tail_normal(z - xi) + numstats::upper_tail_normal(z + xi);
}

double average_power(std::span<const double> xis, std::span<const double> weights,
                     std::int64_t m, double alpha) {
    if (xis.size() != weights.size()) {
        raise(Status::length_mismatch, "average_power: xi/weight lists differ");
    }
    double acc = 0.0;
    std::int64_t m1 = 0;
    for (std::size_t j = 0; j < xis.size(); ++j) {
        if (xis[j] == 0.0) continue;
        acc += per_hypothesis_power(xis[j], weights[j], m, alpha);
        m1 += 1;
    }
    if (m1 == 0) {
        raise(Status::domain_error, "average_power: no non-null signals");
    }
    return acc / static_cast<double>(m1);
}

double fwer_inflation_bound(std::span<const std::int64_t> sizes) {
    if (sizes.empty()) {
        raise(Status::invalid_argument, "fwer_inflation_bound: no groups");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::int64_t r : sizes) {
        if (r < 1) {
            raise(Status::invalid_argument, "fwer_inflation_bound: group size < 1");
        }
        num += std::sqrt(static_cast<double>(r));
        den += static_cast<double>(r);
    }
    return num / den;
}

}  // namespace wbonf::testing
