#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wbonf/numstats.hpp"

namespace wbonf {

// A battery of m test statistics with group labels and the distributional
// model under which p-values are computed. Group indices are dense 0..K-1;
// names are carried for reporting only.
struct TestBattery {
    std::vector<double> stats;
    std::vector<std::int32_t> group_of;  // per test, 0-based group index
    std::vector<std::string> group_names;
    Model model = Model::normal;

    std::size_t size() const { return stats.size(); }
    std::size_t group_count() const { return group_names.size(); }

    std::vector<std::int64_t> group_sizes() const;
    std::vector<double> pvalues() const;
};

// Validates shape, dense group indexing, finite statistics, and (for the
// chi-square model) non-negative statistics.
TestBattery make_battery(std::vector<double> stats,
                         std::vector<std::int32_t> group_of,
                         std::vector<std::string> group_names, Model model);

}  // namespace wbonf
