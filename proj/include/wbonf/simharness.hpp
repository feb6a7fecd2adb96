#pragma once

#include <cstdint>
#include <vector>

#include "wbonf/battery.hpp"
#include "wbonf/testing.hpp"
#include "wbonf/weights.hpp"

// Monte Carlo harness: grouped batteries with planted signals, weighted vs
// plain Bonferroni power and family-wise error across (p0, p1, xi0, m1)
// sweeps, and the R^2 grouping-informativeness summary.

namespace wbonf::simharness {

struct Scenario {
    std::int64_t m = 10000;
    std::int64_t m1 = 100;          // signals, divisible by 5 (one per ladder level)
    double xi0 = 2.0;               // ladder base; levels are xi0 * (1, 1.5, 2, 2.5, 3)
    double p0 = 0.0;                // fraction of nulls moved into the signal groups
    double p1 = 0.0;                // fraction of signals moved into the null groups
    std::int32_t n_groups = 10;
    Model model = Model::normal;
    double alpha = 0.05;
    std::int32_t replicates = 500;
    std::uint64_t master_seed = 1;
    std::int64_t min_group_size = 10;
    double lambda = 0.95;
    bool mix_ladder = false;        // scatter ladder levels across the signal groups
    bool random_grouping = false;   // ignore the partition, label tests uniformly
};

struct ScenarioSignals {
    std::vector<double> xi;                 // per-test signal, 0 for nulls
    std::vector<std::int32_t> group_of;     // per-test group label
    std::vector<std::string> group_names;
    std::int64_t m1 = 0;
};

struct PowerEstimate {
    double weighted_power = 0.0;
    double unweighted_power = 0.0;
    double diff_pct_points = 0.0;       // (weighted - unweighted) * 100
    double fwer_weighted = 0.0;
    double fwer_unweighted = 0.0;
    double mc_standard_error = 0.0;     // sqrt(p(1-p)/R); 0.5/sqrt(R) when p in {0,1}
    double r_squared = 0.0;
    std::int32_t replicates_run = 0;
};

void validate_scenario(const Scenario& sc);

// Ladder partition: nulls spread evenly over the first half of the
// groups, signals in the second half with one ladder level per group; then
// round(p0*m0) random nulls move evenly into the signal groups and
// round(p1*m1) random signals move evenly into the null groups.
ScenarioSignals build_grouping(const Scenario& sc, numstats::Rng& rng);

// 1 - SS_within / SS_total of the signal values under the group labels;
// 0 by convention when every xi is identical.
double r_squared(const ScenarioSignals& signals);

struct ReplicatePair {
    testing::RejectionResult weighted;
    testing::RejectionResult unweighted;
};

// One battery draw at the planted signals, both testing arms on it.
ReplicatePair run_replicate(const ScenarioSignals& signals, const Scenario& sc,
                            numstats::Rng& rng);

// Replicated power/FWER for one scenario. Replicates own derived seeds and
// may run concurrently; the reduction uses integer counts only, so results
// are identical for any thread count.
PowerEstimate run_scenario(const Scenario& sc);

std::vector<PowerEstimate> run_sweep(const std::vector<Scenario>& scenarios);

// All-null battery (m1 = 0): observed FWER of the full estimated-weights
// pipeline against the plain Bonferroni arm.
PowerEstimate fwer_validation(std::int64_t m, std::int32_t n_groups, double alpha,
                              std::int32_t replicates, Model model,
                              std::uint64_t master_seed);

}  // namespace wbonf::simharness
