#include "wbonf/estimation.hpp"

#include <cmath>

namespace wbonf::estimation {

namespace {

MixtureEstimate degenerate_estimate(std::int32_t group_id) {
    MixtureEstimate e;
    e.group_id = group_id;
    e.degenerate = true;
    return e;
}

}  // namespace

GroupSummary summarize_group(std::span<const double> stats, std::int32_t group_id) {
    if (stats.size() < 2) {
        raise(Status::group_too_small,
              "summarize_group: need at least 2 statistics per group");
    }
    double sum = 0.0;
    for (double t : stats) sum += t;
    double mean = sum / static_cast<double>(stats.size());
    double ss = 0.0;
    for (double t : stats) {
        double d = t - mean;
        ss += d * d;
    }
    GroupSummary s;
    s.group_id = group_id;
    s.size = static_cast<std::int64_t>(stats.size());
    s.mean = mean;
    s.variance = ss / static_cast<double>(stats.size() - 1);
    return s;
}

MixtureEstimate mom_normal(const GroupSummary& summary) {
    double y = summary.mean;
    double denom = y * y + summary.variance - 1.0;
    double guard = 1.0 / static_cast<double>(summary.size);

    if (y == 0.0 || denom <= 0.0) {
        return degenerate_estimate(summary.group_id);
    }
    double raw_pi = (y * y) / denom;
    if (!std::isfinite(raw_pi) || raw_pi <= guard) {
        return degenerate_estimate(summary.group_id);
    }
    MixtureEstimate e;
    e.group_id = summary.group_id;
    if (raw_pi > 1.0) {
        e.pi_hat = 1.0;
        e.xi_signed = y;
    } else {
        e.pi_hat = raw_pi;
        e.xi_signed = y / raw_pi;
    }
    e.xi_hat = std::abs(e.xi_signed);
    return e;
}

MixtureEstimate mom_chisq(const GroupSummary& summary) {
    double y = summary.mean;
    if (y <= 1.0) {
        return degenerate_estimate(summary.group_id);
    }
    double b = (summary.variance - 1.0) / (y - 1.0) + y - 5.0;
    double disc = b * b - 4.0;
    if (disc < 0.0 || b < 0.0) {
        // Complex roots, or both roots negative (roots share the sign of b
        // since they multiply to 1).
        return degenerate_estimate(summary.group_id);
    }
    double root_hi = (b + std::sqrt(disc)) / 2.0;  // >= 1
    double root_lo = (b - std::sqrt(disc)) / 2.0;  // <= 1, same sign
    double guard = 1.0 / static_cast<double>(summary.size);

    for (double xi2 : {root_hi, root_lo}) {
        if (!(xi2 > 0.0) || !std::isfinite(xi2)) continue;
        double pi = (y - 1.0) / xi2;
        if (pi <= guard) continue;
        MixtureEstimate e;
        e.group_id = summary.group_id;
        e.pi_hat = pi > 1.0 ? 1.0 : pi;
        e.xi_hat = std::sqrt(xi2);
        e.xi_signed = e.xi_hat;
        return e;
    }
    return degenerate_estimate(summary.group_id);
}

MixtureEstimate estimate_group(const GroupSummary& summary, Model model) {
    return model == Model::chisq ? mom_chisq(summary) : mom_normal(summary);
}

}  // namespace wbonf::estimation
