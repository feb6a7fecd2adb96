#include "wbonf/battery.hpp"

#include <cmath>

namespace wbonf {

std::vector<std::int64_t> TestBattery::group_sizes() const {
    std::vector<std::int64_t> sizes(group_count(), 0);
    for (std::int32_t g : group_of) sizes[static_cast<std::size_t>(g)] += 1;
    return sizes;
}

std::vector<double> TestBattery::pvalues() const {
    std::vector<double> p(stats.size());
    if (model == Model::chisq) {
        for (std::size_t j = 0; j < stats.size(); ++j) {
            p[j] = numstats::pvalue_chisq_1df(stats[j]);
        }
    } else {
        for (std::size_t j = 0; j < stats.size(); ++j) {
            p[j] = numstats::pvalue_normal_two_sided(stats[j]);
        }
    }
    return p;
}

TestBattery make_battery(std::vector<double> stats,
                         std::vector<std::int32_t> group_of,
                         std::vector<std::string> group_names, Model model) {
    if (stats.empty()) {
        raise(Status::invalid_argument, "battery: no test statistics");
    }
    if (stats.size() != group_of.size()) {
        raise(Status::length_mismatch, "battery: stats/group lists differ in length");
    }
    if (group_names.empty()) {
        raise(Status::invalid_argument, "battery: no groups");
    }
    auto k = static_cast<std::int32_t>(group_names.size());
    std::vector<std::int64_t> seen(group_names.size(), 0);
    for (std::int32_t g : group_of) {
        if (g < 0 || g >= k) {
            raise(Status::invalid_argument, "battery: group index out of range");
        }
        seen[static_cast<std::size_t>(g)] += 1;
    }
    for (std::size_t g = 0; g < seen.size(); ++g) {
        if (seen[g] == 0) {
            raise(Status::invalid_argument,
                  "battery: group '" + group_names[g] + "' has no members");
        }
    }
    for (double t : stats) {
        if (!std::isfinite(t)) {
            raise(Status::domain_error, "battery: non-finite test statistic");
        }
        if (model == Model::chisq && t < 0.0) {
            raise(Status::domain_error,
                  "battery: negative statistic under the chi-square model");
        }
    }
    TestBattery b;
    b.stats = std::move(stats);
    b.group_of = std::move(group_of);
    b.group_names = std::move(group_names);
    b.model = model;
    return b;
}

}  // namespace wbonf
