// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.
//
// Known expected failures, analyzed in detail in the project notes: the
// p0 = 0.5 anchor of the power sweep and the random-grouping robustness
// bound sit just outside their windows for every faithful variant of the
// estimation pipeline that reproduces the remaining anchors.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "wbonf/estimation.hpp"
#include "wbonf/numstats.hpp"
#include "wbonf/simharness.hpp"
#include "wbonf/testing.hpp"
#include "wbonf/weights.hpp"

using namespace wbonf;

namespace {

int g_failures = 0;
int g_index = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    ++g_index;
    if (!pass) ++g_failures;
    std::printf("[%2d/10] %-34s %s  (%s)\n", g_index, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// ---- 1. Budget invariant ------------------------------------------------

void criterion_budget() {
    numstats::Rng rng(424242);
    double worst = 0.0;
    bool pass = true;
    for (int rep = 0; rep < 1000; ++rep) {
        std::size_t k = 2 + static_cast<std::size_t>(rng.next_uniform() * 49);
        std::vector<std::int64_t> sizes(k);
        std::vector<double> xis(k);
        std::int64_t m = 0;
        for (std::size_t g = 0; g < k; ++g) {
            sizes[g] = 2 + static_cast<std::int64_t>(rng.next_uniform() * 499);
            xis[g] = 5.0 * rng.next_uniform();
            m += sizes[g];
        }
        xis[0] = std::max(xis[0], 0.5);
        auto sol = weights::solve_budget(xis, sizes, m, 0.05);
        std::vector<double> raw(k);
        for (std::size_t g = 0; g < k; ++g) {
            raw[g] = weights::optimal_weight(xis[g], sol.c, m, 0.05);
        }
        auto gw = weights::smooth_and_renorm(raw, sizes, m, 0.05, 0.95);
        double rel = std::abs(gw.weighted_sum() - static_cast<double>(m)) /
                     static_cast<double>(m);
        worst = std::max(worst, rel);
        if (rel > 1e-9) pass = false;
    }
    report("budget-invariant", pass, fmt("1000 configs, worst |sum-m|/m = %.2e", worst));
}

// ---- 2. Normal MoM exactness ---------------------------------------------

void criterion_mom_exactness() {
    double worst = 0.0;
    bool pass = true;
    for (double pi : {0.05, 0.2, 0.5, 1.0}) {
        for (double xi : {0.5, 1.0, 2.0, 4.0}) {
            estimation::GroupSummary s;
            s.size = 1000;
            s.mean = pi * xi;
            s.variance = 1.0 + pi * xi * xi - pi * pi * xi * xi;
            auto e = estimation::mom_normal(s);
            double err = std::max(std::abs(e.pi_hat - pi), std::abs(e.xi_hat - xi));
            worst = std::max(worst, err);
            if (e.degenerate || err > 1e-12) pass = false;
        }
    }
    report("normal-mom-exactness", pass, fmt("grid 4x4, worst error = %.2e", worst));
}

// ---- 3 / 4 / 10. Monte Carlo sweeps ---------------------------------------

simharness::PowerEstimate run_anchor(double p0, double p1, bool random_grouping,
                                     std::int32_t replicates) {
    simharness::Scenario sc;
    sc.m = 10000;
    sc.m1 = 100;
    sc.xi0 = 2.0;
    sc.p0 = p0;
    sc.p1 = p1;
    sc.n_groups = 10;
    sc.model = Model::normal;
    sc.alpha = 0.05;
    sc.replicates = replicates;
    sc.master_seed = 1;
    sc.random_grouping = random_grouping;
    return simharness::run_scenario(sc);
}

void criterion_p0_sweep() {
    const double targets[4] = {14.0, 5.0, 0.0, -3.0};
    const double p0s[4] = {0.01, 0.1, 0.25, 0.5};
    bool pass = true;
    std::string detail;
    for (int i = 0; i < 4; ++i) {
        auto est = run_anchor(p0s[i], 0.0, false, 1000);
        bool ok = std::abs(est.diff_pct_points - targets[i]) <= 3.0;
        if (!ok) pass = false;
        detail += fmt("p0=%.2f: %+.2f vs %+.0f%s%s", p0s[i], est.diff_pct_points,
                      targets[i], ok ? "" : " OUT", i < 3 ? "; " : "");
    }
    report("p0-sweep-reproduction", pass, detail);
}

void criterion_p1_endpoints() {
    auto low = run_anchor(0.1, 0.05, false, 1000);
    bool low_ok = std::abs(low.diff_pct_points - 7.0) <= 3.0;
    auto high = run_anchor(0.1, 0.9, false, 1000);
    bool high_ok = high.diff_pct_points <= 0.0 && high.diff_pct_points >= -8.0;
    report("p1-endpoints", low_ok && high_ok,
           fmt("p1=0.05: %+.2f vs +7+-3%s; p1=0.90: %+.2f in [-8,0]%s",
               low.diff_pct_points, low_ok ? "" : " OUT", high.diff_pct_points,
               high_ok ? "" : " OUT"));
}

void criterion_random_grouping() {
    auto est = run_anchor(0.0, 0.0, true, 1000);
    bool pass = std::abs(est.diff_pct_points) <= 3.0;
    report("random-grouping-robustness", pass,
           fmt("|%+.2f| <= 3 with R^2 = %.4f%s", est.diff_pct_points, est.r_squared,
               pass ? "" : " OUT"));
}

// ---- 5. FWER under the global null ----------------------------------------

void criterion_fwer_null() {
    const std::int32_t reps = 2000;
    auto est = simharness::fwer_validation(10000, 10, 0.05, reps, Model::normal, 1);
    std::vector<std::int64_t> sizes(10, 1000);
    double bm = testing::fwer_inflation_bound(sizes);
    double se = std::sqrt(0.05 * 0.95 / static_cast<double>(reps));
    double bound_w = 0.05 + bm + 3.0 * se;
    double bound_u = 0.05 + 3.0 * se;
    bool pass = est.fwer_weighted <= bound_w && est.fwer_unweighted <= bound_u;
    report("fwer-under-null", pass,
           fmt("weighted %.4f <= %.4f; unweighted %.4f <= %.4f",
               est.fwer_weighted, bound_w, est.fwer_unweighted, bound_u));
}

// ---- 6. Reduction equivalence ---------------------------------------------

void criterion_reduction() {
    numstats::Rng rng(777);
    bool pass = true;
    for (int rep = 0; rep < 1000 && pass; ++rep) {
        std::size_t m = 1 + static_cast<std::size_t>(rng.next_uniform() * 500);
        std::vector<double> p(m), w(m, 1.0);
        for (auto& x : p) {
            x = rng.next_uniform() < 0.5 ? rng.next_uniform() * 0.2 / static_cast<double>(m)
                                         : rng.next_uniform();
        }
        auto res = testing::weighted_reject(p, w, 0.05);
        for (std::size_t j = 0; j < m; ++j) {
            if (res.rejected[j] != (p[j] <= 0.05 / static_cast<double>(m))) {
                pass = false;
                break;
            }
        }
    }
    report("bonferroni-reduction", pass, "1000 random p-vectors, exact set equality");
}

// ---- 7. Weight-shape properties -------------------------------------------

void criterion_shape() {
    // Figure-1 population: 100,000 signals drawn as |N(0, 2^2)|.
    const std::int64_t m = 100000;
    numstats::Rng rng(1);
    std::vector<double> xi(static_cast<std::size_t>(m));
    std::vector<std::int64_t> ones(xi.size(), 1);
    for (auto& x : xi) x = std::abs(2.0 * rng.next_normal());
    auto sol = weights::solve_budget(xi, ones, m, 0.05);

    bool c_positive = sol.c > 0.0;
    // Unimodality on the (0, 6] grid.
    std::vector<double> w;
    for (int i = 1; i <= 120; ++i) {
        w.push_back(weights::optimal_weight(0.05 * i, sol.c, m, 0.05));
    }
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        if (w[i] > w[i - 1] && w[i] > w[i + 1]) ++maxima;
    }
    // Crossings of the Bonferroni threshold, counted out to xi = 12 so both
    // tails of the curve are covered (the claim is for sufficiently small
    // and sufficiently large signals, not a bounded grid).
    std::vector<double> wide;
    for (int i = 1; i <= 240; ++i) {
        wide.push_back(weights::optimal_weight(0.05 * i, sol.c, m, 0.05));
    }
    int crossings = 0;
    for (std::size_t i = 1; i < wide.size(); ++i) {
        if ((wide[i - 1] - 1.0) * (wide[i] - 1.0) < 0.0) ++crossings;
    }
    bool ends_below = wide.front() < 1.0 && wide.back() < 1.0;
    bool pass = c_positive && maxima == 1 && crossings == 2 && ends_below;
    report("weight-shape", pass,
           fmt("c = %.3f > 0, interior maxima = %d, threshold crossings = %d",
               sol.c, maxima, crossings));
}

// ---- 8. Equal-signal symmetry ---------------------------------------------

void criterion_equal_signal() {
    std::vector<double> xis(10, 2.0);
    std::vector<std::int64_t> sizes(10, 1000);
    auto sol = weights::solve_budget(xis, sizes, 10000, 0.05);
    std::vector<double> raw(10);
    for (std::size_t g = 0; g < 10; ++g) {
        raw[g] = weights::optimal_weight(2.0, sol.c, 10000, 0.05);
    }
    auto gw = weights::smooth_and_renorm(raw, sizes, 10000, 0.05, 0.95);
    double worst = 0.0;
    for (double wv : gw.w_hat) worst = std::max(worst, std::abs(wv - 1.0));
    report("equal-signal-symmetry", worst <= 1e-9,
           fmt("max |w - 1| = %.2e", worst));
}

// ---- 9. Chi-square / normal bridge ----------------------------------------

void criterion_bridge() {
    numstats::Rng rng(99);
    const std::size_t n = 100000;
    std::vector<double> via_normal(n), via_chisq(n);
    bool pass = true;
    for (std::size_t j = 0; j < n; ++j) {
        double t = rng.next_normal() + (j % 10 == 0 ? 2.0 : 0.0);
        via_normal[j] = numstats::pvalue_normal_two_sided(t);
        via_chisq[j] = numstats::pvalue_chisq_1df(t * t);
    }
    if (std::memcmp(via_normal.data(), via_chisq.data(), n * sizeof(double)) != 0) {
        pass = false;
    }
    report("chisq-normal-bridge", pass, fmt("%zu statistics, bit-for-bit", n));
}

}  // namespace

int main() {
    std::printf("wbonf acceptance suite\n");
    criterion_budget();
    criterion_mom_exactness();
    criterion_p0_sweep();
    criterion_p1_endpoints();
    criterion_fwer_null();
    criterion_reduction();
    criterion_shape();
    criterion_equal_signal();
    criterion_bridge();
    criterion_random_grouping();
    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
