#include "wbonf/simharness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

namespace wbonf::simharness {

namespace {

constexpr std::uint64_t kGroupingStream = 0;   // replicate i uses stream 1 + i

std::int64_t round_half_up(double x) {
    return static_cast<std::int64_t>(std::floor(x + 0.5));
}

// Partial Fisher-Yates: the first `take` entries of `pool` become a uniform
// sample without replacement.
void draw_prefix(std::vector<std::int64_t>& pool, std::int64_t take,
                 numstats::Rng& rng) {
    std::int64_t n = static_cast<std::int64_t>(pool.size());
    for (std::int64_t i = 0; i < take; ++i) {
        std::int64_t j = i + static_cast<std::int64_t>(
                                 rng.next_u64() % static_cast<std::uint64_t>(n - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
}

struct ArmCounts {
    std::int64_t true_rejections = 0;   // summed over replicates
    std::int64_t fwer_events = 0;       // replicates with >= 1 false rejection
};

struct ReplicateCounts {
    ArmCounts weighted;
    ArmCounts unweighted;
};

void tally(const testing::RejectionResult& res, const std::vector<double>& xi,
           ArmCounts& counts) {
    std::int64_t true_rej = 0;
    bool any_false = false;
    for (std::size_t j = 0; j < res.rejected.size(); ++j) {
        if (!res.rejected[j]) continue;
        if (xi[j] != 0.0) {
            true_rej += 1;
        } else {
            any_false = true;
        }
    }
    counts.true_rejections += true_rej;
    if (any_false) counts.fwer_events += 1;
}

double binomial_se(double p, std::int32_t replicates) {
    double v = p * (1.0 - p);
    if (v <= 0.0) {
        // Degenerate estimate; report the conservative p = 1/2 value.
        return 0.5 / std::sqrt(static_cast<double>(replicates));
    }
    return std::sqrt(v / static_cast<double>(replicates));
}

}  // namespace

void validate_scenario(const Scenario& sc) {
    if (sc.m < 1) raise(Status::invalid_argument, "scenario: m must be >= 1");
    if (sc.m1 < 0 || sc.m1 > sc.m) {
        raise(Status::invalid_argument, "scenario: m1 must lie in [0, m]");
    }
    if (sc.m1 > 0 && sc.m1 % 5 != 0) {
        raise(Status::invalid_argument,
              "scenario: m1 must be divisible by 5 (one ladder level each)");
    }
    if (!(sc.p0 >= 0.0 && sc.p0 <= 1.0) || !(sc.p1 >= 0.0 && sc.p1 <= 1.0)) {
        raise(Status::invalid_argument, "scenario: p0 and p1 must lie in [0,1]");
    }
    if (sc.n_groups < 2) raise(Status::invalid_argument, "scenario: n_groups must be >= 2");
    if (sc.m1 > 0 && !sc.random_grouping && sc.n_groups != 10) {
        raise(Status::invalid_argument,
              "scenario: the ladder partition uses 10 groups (5 null, 5 signal)");
    }
    if (!(sc.alpha > 0.0 && sc.alpha < 1.0)) {
        raise(Status::invalid_argument, "scenario: alpha must lie in (0,1)");
    }
    if (sc.replicates < 1) raise(Status::invalid_argument, "scenario: replicates must be >= 1");
    if (!(sc.xi0 > 0.0) && sc.m1 > 0) {
        raise(Status::invalid_argument, "scenario: xi0 must be > 0 when signals exist");
    }
    if (!(sc.lambda >= 0.0 && sc.lambda <= 1.0)) {
        raise(Status::invalid_argument, "scenario: lambda must lie in [0,1]");
    }
}

ScenarioSignals build_grouping(const Scenario& sc, numstats::Rng& rng) {
    validate_scenario(sc);
    const std::int64_t m = sc.m;
    const std::int64_t m1 = sc.m1;
    const std::int64_t m0 = m - m1;
    const std::int32_t k = sc.n_groups;

    ScenarioSignals out;
    out.m1 = m1;
    out.xi.assign(static_cast<std::size_t>(m), 0.0);
    out.group_of.assign(static_cast<std::size_t>(m), 0);
    out.group_names.reserve(static_cast<std::size_t>(k));
    for (std::int32_t g = 0; g < k; ++g) {
        out.group_names.push_back("G" + std::to_string(g + 1));
    }

    // Tests 0..m0-1 are nulls; the rest carry the ladder, m1/5 per level.
    static const double ladder[5] = {1.0, 1.5, 2.0, 2.5, 3.0};
    for (std::int64_t i = 0; i < m1; ++i) {
        std::int64_t level = i / (m1 / 5);
        out.xi[static_cast<std::size_t>(m0 + i)] = sc.xi0 * ladder[level];
    }

    if (sc.random_grouping) {
        for (std::int64_t j = 0; j < m; ++j) {
            auto g = static_cast<std::int32_t>(rng.next_uniform() * k);
            out.group_of[static_cast<std::size_t>(j)] = std::min(g, k - 1);
        }
    } else if (m1 == 0) {
        for (std::int64_t j = 0; j < m; ++j) {
            out.group_of[static_cast<std::size_t>(j)] =
                static_cast<std::int32_t>(j % k);
        }
    } else {
        // Ideal partition: nulls round-robin over groups 1-5 (they are
        // exchangeable, so a deterministic even split draws the same
        // distribution), each signal level in its own group among 6-10.
        for (std::int64_t j = 0; j < m0; ++j) {
            out.group_of[static_cast<std::size_t>(j)] =
                static_cast<std::int32_t>(j % 5);
        }
        if (sc.mix_ladder) {
            std::vector<std::int64_t> alts(static_cast<std::size_t>(m1));
            std::iota(alts.begin(), alts.end(), m0);
            draw_prefix(alts, m1, rng);
            for (std::int64_t i = 0; i < m1; ++i) {
                out.group_of[static_cast<std::size_t>(alts[static_cast<std::size_t>(i)])] =
                    static_cast<std::int32_t>(5 + i % 5);
            }
        } else {
            for (std::int64_t i = 0; i < m1; ++i) {
                out.group_of[static_cast<std::size_t>(m0 + i)] =
                    static_cast<std::int32_t>(5 + i / (m1 / 5));
            }
        }

        // Swap a fraction p0 of the nulls into groups 6-10 and p1 of the
        // signals into groups 1-5, spread round-robin from the lowest group.
        std::int64_t n0 = round_half_up(sc.p0 * static_cast<double>(m0));
        std::vector<std::int64_t> nulls(static_cast<std::size_t>(m0));
        std::iota(nulls.begin(), nulls.end(), 0);
        draw_prefix(nulls, n0, rng);
        for (std::int64_t i = 0; i < n0; ++i) {
            out.group_of[static_cast<std::size_t>(nulls[static_cast<std::size_t>(i)])] =
                static_cast<std::int32_t>(5 + i % 5);
        }

        std::int64_t n1 = round_half_up(sc.p1 * static_cast<double>(m1));
        std::vector<std::int64_t> alts(static_cast<std::size_t>(m1));
        std::iota(alts.begin(), alts.end(), m0);
        draw_prefix(alts, n1, rng);
        for (std::int64_t i = 0; i < n1; ++i) {
            out.group_of[static_cast<std::size_t>(alts[static_cast<std::size_t>(i)])] =
                static_cast<std::int32_t>(i % 5);
        }
    }

    std::vector<std::int64_t> sizes(static_cast<std::size_t>(k), 0);
    for (std::int32_t g : out.group_of) sizes[static_cast<std::size_t>(g)] += 1;
    for (std::int32_t g = 0; g < k; ++g) {
        if (sizes[static_cast<std::size_t>(g)] < std::max<std::int64_t>(sc.min_group_size, 2)) {
            raise(Status::invalid_argument,
                  "scenario: group " + out.group_names[static_cast<std::size_t>(g)] +
                      " ends up with " + std::to_string(sizes[static_cast<std::size_t>(g)]) +
                      " tests, below the minimum");
        }
    }
    return out;
}

double r_squared(const ScenarioSignals& signals) {
    const auto m = signals.xi.size();
    std::size_t k = signals.group_names.size();
    double grand = 0.0;
    for (double x : signals.xi) grand += x;
    grand /= static_cast<double>(m);

    std::vector<double> group_sum(k, 0.0);
    std::vector<std::int64_t> group_n(k, 0);
    for (std::size_t j = 0; j < m; ++j) {
        auto g = static_cast<std::size_t>(signals.group_of[j]);
        group_sum[g] += signals.xi[j];
        group_n[g] += 1;
    }

    double ss_total = 0.0;
    double ss_within = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        auto g = static_cast<std::size_t>(signals.group_of[j]);
        double mean_g = group_sum[g] / static_cast<double>(group_n[g]);
        double dt = signals.xi[j] - grand;
        double dw = signals.xi[j] - mean_g;
        ss_total += dt * dt;
        ss_within += dw * dw;
    }
    if (ss_total <= 0.0) return 0.0;
    return 1.0 - ss_within / ss_total;
}

ReplicatePair run_replicate(const ScenarioSignals& signals, const Scenario& sc,
                            numstats::Rng& rng) {
    const std::size_t m = signals.xi.size();
    std::vector<double> stats(m);
    for (std::size_t j = 0; j < m; ++j) {
        double z = rng.next_normal() + signals.xi[j];
        stats[j] = (sc.model == Model::chisq) ? z * z : z;
    }
    auto battery = make_battery(std::move(stats), signals.group_of,
                                signals.group_names, sc.model);
    auto pvalues = battery.pvalues();

    auto pipeline = weights::run_pipeline(battery, sc.alpha, sc.min_group_size, sc.lambda);
    auto per_test = pipeline.per_test_weights(battery);

    ReplicatePair pair;
    pair.weighted = testing::weighted_reject(pvalues, per_test, sc.alpha);
    pair.weighted.bm = testing::fwer_inflation_bound(pipeline.weights.sizes);

    std::vector<double> unit(m, 1.0);
    pair.unweighted = testing::weighted_reject(pvalues, unit, sc.alpha);
    pair.unweighted.bm = pair.weighted.bm;
    return pair;
}

PowerEstimate run_scenario(const Scenario& sc) {
    validate_scenario(sc);
    numstats::Rng grouping_rng(numstats::derive_seed(sc.master_seed, kGroupingStream));
    ScenarioSignals signals = build_grouping(sc, grouping_rng);

    const std::int32_t reps = sc.replicates;
    auto run_range = [&](std::int32_t lo, std::int32_t hi, ReplicateCounts& counts) {
        for (std::int32_t i = lo; i < hi; ++i) {
            numstats::Rng rng(numstats::derive_seed(
                sc.master_seed, 1 + static_cast<std::uint64_t>(i)));
            ReplicatePair pair = run_replicate(signals, sc, rng);
            tally(pair.weighted, signals.xi, counts.weighted);
            tally(pair.unweighted, signals.xi, counts.unweighted);
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    unsigned n_threads = std::min<unsigned>(hw == 0 ? 1 : hw,
                                            static_cast<unsigned>(reps));
    ReplicateCounts totals;
    if (n_threads <= 1 || reps < 16) {
        run_range(0, reps, totals);
    } else {
        std::vector<ReplicateCounts> partial(n_threads);
        std::vector<std::thread> pool;
        std::int32_t chunk = (reps + static_cast<std::int32_t>(n_threads) - 1) /
                             static_cast<std::int32_t>(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            std::int32_t lo = static_cast<std::int32_t>(t) * chunk;
            std::int32_t hi = std::min(reps, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi, std::ref(partial[t]));
        }
        for (auto& th : pool) th.join();
        // Integer counts only, so the reduction order cannot change results.
        for (const auto& p : partial) {
            totals.weighted.true_rejections += p.weighted.true_rejections;
            totals.weighted.fwer_events += p.weighted.fwer_events;
            totals.unweighted.true_rejections += p.unweighted.true_rejections;
            totals.unweighted.fwer_events += p.unweighted.fwer_events;
        }
    }

    PowerEstimate est;
    est.replicates_run = reps;
    est.r_squared = r_squared(signals);
    double denom_reps = static_cast<double>(reps);
    if (sc.m1 > 0) {
        double denom = static_cast<double>(sc.m1) * denom_reps;
        est.weighted_power = static_cast<double>(totals.weighted.true_rejections) / denom;
        est.unweighted_power = static_cast<double>(totals.unweighted.true_rejections) / denom;
    }
    est.fwer_weighted = static_cast<double>(totals.weighted.fwer_events) / denom_reps;
    est.fwer_unweighted = static_cast<double>(totals.unweighted.fwer_events) / denom_reps;
    est.diff_pct_points = (est.weighted_power - est.unweighted_power) * 100.0;
    if (sc.m1 > 0) {
        est.mc_standard_error =
            binomial_se(0.5 * (est.weighted_power + est.unweighted_power), reps);
    } else {
        est.mc_standard_error = binomial_se(est.fwer_weighted, reps);
    }
    return est;
}

std::vector<PowerEstimate> run_sweep(const std::vector<Scenario>& scenarios) {
    std::vector<PowerEstimate> out;
    out.reserve(scenarios.size());
    for (const auto& sc : scenarios) out.push_back(run_scenario(sc));
    return out;
}

PowerEstimate fwer_validation(std::int64_t m, std::int32_t n_groups, double alpha,
                              std::int32_t replicates, Model model,
                              std::uint64_t master_seed) {
    Scenario sc;
    sc.m = m;
    sc.m1 = 0;
    sc.n_groups = n_groups;
    sc.model = model;
    sc.alpha = alpha;
    sc.replicates = replicates;
    sc.master_seed = master_seed;
    return run_scenario(sc);
}

}  // namespace wbonf::simharness
